#pragma once

#include <filesystem>

#include "fbident/mimo.hpp"
#include "fbident/signal.hpp"

namespace fbident {

// Signal files carry a "ch0,ch1,..." header and one time sample per row.
// Values are written with std::to_chars, so finite samples survive a
// write/read round trip bit for bit. Parse failures raise ParseError naming
// the offending line and column.
MultichannelSignal read_signal_csv(const std::filesystem::path& path);
void write_signal_csv(const MultichannelSignal& signal, const std::filesystem::path& path);

// Model files carry an "m,p,l,h" header and one coefficient per row, in any
// row order as long as the (m, p, l) grid is complete and free of duplicates.
MimoFirModel read_model_csv(const std::filesystem::path& path);
void write_model_csv(const MimoFirModel& model, const std::filesystem::path& path);

}  // namespace fbident
