#include "fbident/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "fbident/errors.hpp"
#include "text_util.hpp"

namespace fbident {
namespace {

std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

double parse_double_cell(std::string_view cell, const std::filesystem::path& path,
                         std::size_t line, std::size_t column) {
  double value = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || cell.empty()) {
    throw ParseError(location(path, line) + ": column " + std::to_string(column) + ": '" +
                     std::string(cell) + "' is not a number");
  }
  return value;
}

std::size_t parse_index_cell(std::string_view cell, const std::filesystem::path& path,
                             std::size_t line, std::size_t column) {
  std::size_t value = 0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || cell.empty()) {
    throw ParseError(location(path, line) + ": column " + std::to_string(column) + ": '" +
                     std::string(cell) + "' is not a nonnegative integer");
  }
  return value;
}

// Returns data lines one at a time; tolerates a single blank line at the very
// end of the file, rejects blank lines elsewhere.
bool next_row(std::ifstream& in, std::string& line, std::size_t& lineno,
              const std::filesystem::path& path) {
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in.peek() == std::ifstream::traits_type::eof()) return false;
      throw ParseError(location(path, lineno) + ": blank row");
    }
    return true;
  }
  return false;
}

}  // namespace

MultichannelSignal read_signal_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path.string() + ": cannot open file");
  }
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) {
    throw ParseError(path.string() + ": empty file, expected a 'ch0,ch1,...' header");
  }
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_cells(line);
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] != "ch" + std::to_string(j)) {
      throw ParseError(location(path, lineno) + ": header cell " + std::to_string(j + 1) + " is '" +
                       std::string(header[j]) + "', expected 'ch" + std::to_string(j) + "'");
    }
  }
  const std::size_t channels = header.size();

  std::vector<std::vector<double>> data(channels);
  while (next_row(in, line, lineno, path)) {
    const auto cells = split_cells(line);
    if (cells.size() != channels) {
      throw ParseError(location(path, lineno) + ": row has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(channels));
    }
    for (std::size_t j = 0; j < channels; ++j) {
      data[j].push_back(parse_double_cell(cells[j], path, lineno, j + 1));
    }
  }
  return MultichannelSignal(std::move(data));
}

void write_signal_csv(const MultichannelSignal& signal, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open file for writing");
  }
  for (std::size_t c = 0; c < signal.channels(); ++c) {
    out << (c == 0 ? "" : ",") << "ch" << c;
  }
  out << '\n';
  for (std::size_t n = 0; n < signal.length(); ++n) {
    for (std::size_t c = 0; c < signal.channels(); ++c) {
      if (c != 0) out << ',';
      out << detail::format_double(signal(c, n));
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error(path.string() + ": write failed");
  }
}

MimoFirModel read_model_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path.string() + ": cannot open file");
  }
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) {
    throw ParseError(path.string() + ": empty file, expected an 'm,p,l,h' header");
  }
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    const auto header = split_cells(line);
    const char* expected[] = {"m", "p", "l", "h"};
    if (header.size() != 4 || header[0] != expected[0] || header[1] != expected[1] ||
        header[2] != expected[2] || header[3] != expected[3]) {
      throw ParseError(location(path, lineno) + ": malformed header, expected 'm,p,l,h'");
    }
  }

  struct Entry {
    std::size_t m, p, l;
    double h;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::size_t outputs = 0, inputs = 0, taps = 0;
  while (next_row(in, line, lineno, path)) {
    const auto cells = split_cells(line);
    if (cells.size() != 4) {
      throw ParseError(location(path, lineno) + ": row has " + std::to_string(cells.size()) +
                       " cells, expected 4");
    }
    Entry e;
    e.m = parse_index_cell(cells[0], path, lineno, 1);
    e.p = parse_index_cell(cells[1], path, lineno, 2);
    e.l = parse_index_cell(cells[2], path, lineno, 3);
    e.h = parse_double_cell(cells[3], path, lineno, 4);
    e.line = lineno;
    outputs = std::max(outputs, e.m + 1);
    inputs = std::max(inputs, e.p + 1);
    taps = std::max(taps, e.l + 1);
    entries.push_back(e);
  }
  if (entries.empty()) {
    throw ParseError(path.string() + ": no coefficients");
  }

  std::vector<double> coeffs(outputs * inputs * taps, 0.0);
  std::vector<char> seen(coeffs.size(), 0);
  for (const Entry& e : entries) {
    const std::size_t idx = (e.m * inputs + e.p) * taps + e.l;
    if (seen[idx]) {
      throw ParseError(location(path, e.line) + ": duplicate coefficient (" + std::to_string(e.m) +
                       "," + std::to_string(e.p) + "," + std::to_string(e.l) + ")");
    }
    seen[idx] = 1;
    coeffs[idx] = e.h;
  }
  for (std::size_t m = 0; m < outputs; ++m) {
    for (std::size_t p = 0; p < inputs; ++p) {
      for (std::size_t l = 0; l < taps; ++l) {
        if (!seen[(m * inputs + p) * taps + l]) {
          throw ParseError(path.string() + ": coefficient (" + std::to_string(m) + "," +
                           std::to_string(p) + "," + std::to_string(l) + ") missing");
        }
      }
    }
  }
  return MimoFirModel(outputs, inputs, taps, std::move(coeffs));
}

void write_model_csv(const MimoFirModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open file for writing");
  }
  out << "m,p,l,h\n";
  for (std::size_t m = 0; m < model.outputs(); ++m) {
    for (std::size_t p = 0; p < model.inputs(); ++p) {
      for (std::size_t l = 0; l < model.taps(); ++l) {
        out << m << ',' << p << ',' << l << ',' << detail::format_double(model(m, p, l)) << '\n';
      }
    }
  }
  if (!out) {
    throw std::runtime_error(path.string() + ": write failed");
  }
}

}  // namespace fbident
