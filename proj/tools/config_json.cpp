#include "config_json.hpp"

#include <fstream>
#include <initializer_list>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fbident/csv.hpp"
#include "fbident/errors.hpp"

namespace fbident::tools {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail(where, "unknown key \"" + it.key() + "\"");
    }
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    fail(where, std::string("missing required key \"") + key + "\"");
  }
  return *it;
}

double as_number(const json& value, const std::string& where) {
  if (!value.is_number()) {
    fail(where, "expected a number");
  }
  return value.get<double>();
}

std::uint64_t as_unsigned(const json& value, const std::string& where) {
  if (!value.is_number_unsigned()) {
    fail(where, "expected a non-negative integer");
  }
  return value.get<std::uint64_t>();
}

std::string as_string(const json& value, const std::string& where) {
  if (!value.is_string()) {
    fail(where, "expected a string");
  }
  return value.get<std::string>();
}

std::vector<ArSpec> parse_ar_inputs(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty()) {
    fail(where, "expected a non-empty array of generator objects");
  }
  std::vector<ArSpec> specs;
  specs.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string here = where + "[" + std::to_string(i) + "]";
    const json& gen = arr[i];
    if (!gen.is_object()) {
      fail(here, "expected an object");
    }
    expect_keys(gen, here, {"poles", "drive_variance", "seed", "burn_in"});
    ArSpec spec;
    // Channels left without an explicit seed get distinct streams, otherwise
    // identical generators would produce identical (hence dependent) inputs.
    spec.seed = i;
    const json& poles = require(gen, here, "poles");
    if (!poles.is_array()) {
      fail(here + ".poles", "expected an array of {radius, angle} objects");
    }
    for (std::size_t j = 0; j < poles.size(); ++j) {
      const std::string pole_here = here + ".poles[" + std::to_string(j) + "]";
      const json& pole = poles[j];
      if (!pole.is_object()) {
        fail(pole_here, "expected an object");
      }
      expect_keys(pole, pole_here, {"radius", "angle"});
      PolePair pair;
      pair.radius = as_number(require(pole, pole_here, "radius"), pole_here + ".radius");
      pair.angle = as_number(require(pole, pole_here, "angle"), pole_here + ".angle");
      spec.poles.push_back(pair);
    }
    if (const auto it = gen.find("drive_variance"); it != gen.end()) {
      spec.drive_variance = as_number(*it, here + ".drive_variance");
    }
    if (const auto it = gen.find("seed"); it != gen.end()) {
      spec.seed = as_unsigned(*it, here + ".seed");
    }
    if (const auto it = gen.find("burn_in"); it != gen.end()) {
      spec.burn_in = static_cast<std::size_t>(as_unsigned(*it, here + ".burn_in"));
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

MimoFirModel parse_full_model(const json& coeffs, const std::string& where) {
  if (!coeffs.is_array() || coeffs.empty()) {
    fail(where, "expected a non-empty array [output][input][lag]");
  }
  const std::size_t outputs = coeffs.size();
  std::size_t inputs = 0, taps = 0;
  std::vector<double> flat;
  for (std::size_t m = 0; m < outputs; ++m) {
    const json& row = coeffs[m];
    const std::string row_here = where + "[" + std::to_string(m) + "]";
    if (!row.is_array() || row.empty()) {
      fail(row_here, "expected a non-empty array of per-input tap lists");
    }
    if (m == 0) {
      inputs = row.size();
    } else if (row.size() != inputs) {
      fail(row_here, "expected " + std::to_string(inputs) + " input entries");
    }
    for (std::size_t p = 0; p < inputs; ++p) {
      const json& tap_list = row[p];
      const std::string tap_here = row_here + "[" + std::to_string(p) + "]";
      if (!tap_list.is_array() || tap_list.empty()) {
        fail(tap_here, "expected a non-empty array of taps");
      }
      if (m == 0 && p == 0) {
        taps = tap_list.size();
      } else if (tap_list.size() != taps) {
        fail(tap_here, "expected " + std::to_string(taps) + " taps");
      }
      for (std::size_t l = 0; l < taps; ++l) {
        flat.push_back(as_number(tap_list[l], tap_here + "[" + std::to_string(l) + "]"));
      }
    }
  }
  return MimoFirModel(outputs, inputs, taps, std::move(flat));
}

MimoFirModel parse_diagonal_model(const json& coeffs, const std::string& where) {
  if (!coeffs.is_array() || coeffs.empty()) {
    fail(where, "expected a non-empty array [channel][lag]");
  }
  const std::size_t channels = coeffs.size();
  std::size_t taps = 0;
  std::vector<std::vector<double>> diag(channels);
  for (std::size_t c = 0; c < channels; ++c) {
    const json& tap_list = coeffs[c];
    const std::string here = where + "[" + std::to_string(c) + "]";
    if (!tap_list.is_array() || tap_list.empty()) {
      fail(here, "expected a non-empty array of taps");
    }
    if (c == 0) {
      taps = tap_list.size();
    } else if (tap_list.size() != taps) {
      fail(here, "expected " + std::to_string(taps) + " taps");
    }
    for (std::size_t l = 0; l < taps; ++l) {
      diag[c].push_back(as_number(tap_list[l], here + "[" + std::to_string(l) + "]"));
    }
  }
  MimoFirModel model(channels, channels, taps);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t l = 0; l < taps; ++l) {
      model(c, c, l) = diag[c][l];
    }
  }
  return model;
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path.string() + ": cannot open config file");
  }
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (!root.is_object()) {
    throw ConfigError(path.string() + ": top level must be an object");
  }
  const std::filesystem::path base =
      path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto resolve = [&base](const std::string& p) {
    const std::filesystem::path q(p);
    return q.is_absolute() ? q : base / q;
  };

  expect_keys(root, "config",
              {"samples", "output_dir", "inputs", "model", "identification", "noise"});

  ExperimentConfig cfg;
  cfg.output_dir = base;
  if (const auto it = root.find("samples"); it != root.end()) {
    cfg.samples = static_cast<std::size_t>(as_unsigned(*it, "samples"));
  }
  if (const auto it = root.find("output_dir"); it != root.end()) {
    cfg.output_dir = resolve(as_string(*it, "output_dir"));
  }

  const json& model = require(root, "config", "model");
  if (!model.is_object()) {
    fail("model", "expected an object");
  }
  expect_keys(model, "model", {"structure", "coefficients", "csv"});
  if (const auto it = model.find("csv"); it != model.end()) {
    if (model.contains("structure") || model.contains("coefficients")) {
      fail("model", "csv excludes structure/coefficients");
    }
    cfg.true_model = read_model_csv(resolve(as_string(*it, "model.csv")));
  } else {
    const std::string structure = as_string(require(model, "model", "structure"),
                                            "model.structure");
    const json& coeffs = require(model, "model", "coefficients");
    if (structure == "full") {
      cfg.true_model = parse_full_model(coeffs, "model.coefficients");
    } else if (structure == "diagonal") {
      cfg.true_model = parse_diagonal_model(coeffs, "model.coefficients");
    } else {
      fail("model.structure", "expected \"full\" or \"diagonal\", got \"" + structure + "\"");
    }
  }

  const json& inputs = require(root, "config", "inputs");
  if (!inputs.is_object()) {
    fail("inputs", "expected an object");
  }
  expect_keys(inputs, "inputs", {"ar", "csv"});
  const bool has_ar = inputs.contains("ar");
  const bool has_csv = inputs.contains("csv");
  if (has_ar == has_csv) {
    fail("inputs", "set exactly one of \"ar\" and \"csv\"");
  }
  if (has_ar) {
    cfg.ar_inputs = parse_ar_inputs(inputs["ar"], "inputs.ar");
  } else {
    const json& files = inputs["csv"];
    if (!files.is_array() || files.empty()) {
      fail("inputs.csv", "expected a non-empty array of file paths");
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
      cfg.input_csvs.push_back(
          resolve(as_string(files[i], "inputs.csv[" + std::to_string(i) + "]")));
    }
  }

  cfg.ident.taps = cfg.true_model.taps();
  if (const auto it = root.find("identification"); it != root.end()) {
    const json& ident = *it;
    if (!ident.is_object()) {
      fail("identification", "expected an object");
    }
    expect_keys(ident, "identification", {"taps", "method", "ridge", "lambda"});
    if (const auto f = ident.find("taps"); f != ident.end()) {
      cfg.ident.taps = static_cast<std::size_t>(as_unsigned(*f, "identification.taps"));
    }
    if (const auto f = ident.find("method"); f != ident.end()) {
      const std::string method = as_string(*f, "identification.method");
      if (method == "block-ls") {
        cfg.ident.method = IdentMethod::kBlockLs;
      } else if (method == "rls") {
        cfg.ident.method = IdentMethod::kRls;
      } else if (method == "order-recursive") {
        cfg.ident.method = IdentMethod::kOrderRecursive;
      } else if (method == "wiener") {
        cfg.ident.method = IdentMethod::kWiener;
      } else {
        fail("identification.method",
             "expected block-ls, rls, order-recursive, or wiener; got \"" + method + "\"");
      }
    }
    if (const auto f = ident.find("ridge"); f != ident.end()) {
      cfg.ident.ridge = as_number(*f, "identification.ridge");
    }
    if (const auto f = ident.find("lambda"); f != ident.end()) {
      cfg.ident.lambda = as_number(*f, "identification.lambda");
    }
  }

  cfg.noise_seeds.resize(10);
  std::iota(cfg.noise_seeds.begin(), cfg.noise_seeds.end(), std::uint64_t{1});
  if (const auto it = root.find("noise"); it != root.end()) {
    const json& noise = *it;
    if (!noise.is_object()) {
      fail("noise", "expected an object");
    }
    expect_keys(noise, "noise", {"snrs", "seeds"});
    if (const auto f = noise.find("snrs"); f != noise.end()) {
      if (!f->is_array()) {
        fail("noise.snrs", "expected an array of numbers");
      }
      for (std::size_t i = 0; i < f->size(); ++i) {
        cfg.snrs.push_back(as_number((*f)[i], "noise.snrs[" + std::to_string(i) + "]"));
      }
    }
    if (const auto f = noise.find("seeds"); f != noise.end()) {
      if (!f->is_array() || f->empty()) {
        fail("noise.seeds", "expected a non-empty array of non-negative integers");
      }
      cfg.noise_seeds.clear();
      for (std::size_t i = 0; i < f->size(); ++i) {
        cfg.noise_seeds.push_back(as_unsigned((*f)[i], "noise.seeds[" + std::to_string(i) + "]"));
      }
    }
  }

  return cfg;
}

}  // namespace fbident::tools
