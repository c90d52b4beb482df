#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ratefix/bailey.hpp"
#include "ratefix/leslie_gower.hpp"
#include "ratefix/rating.hpp"
#include "ratefix/risk_tensor.hpp"

namespace ratefix {

/// Loss and exposure tensors parsed from one long-format CSV.
struct RatingData {
    RiskTensor losses;
    RiskTensor exposures;
};

/// Long-format rating CSV: one 0-based index column per factor, then
/// `exposure`, then `loss`; header row required. The grid must be dense and
/// complete: every cell exactly once. Axis extents are inferred from the
/// largest index seen per column.
RatingData parse_rating_csv_text(const std::string& text);
RatingData parse_rating_csv(const std::string& path);

/// Parses, optionally permutes the chosen base cell to the front of every
/// axis, and validates the data as a rating problem.
RatingProblem ingest_rating_csv(const std::string& path, double plr, bool strict = true,
                                const std::optional<std::vector<std::size_t>>& base_cell =
                                    std::nullopt);

/// Two-factor data reinterpreted for the minimum-bias fit: weights are the
/// exposures, observed loss costs are loss / exposure per cell.
BaileyProblem to_bailey_problem(const RatingData& data);

/// Leslie-Gower model JSON: {"b": [b_1..b_d], "C": [row-major d*d array]}.
LGModel parse_lg_json_text(const std::string& text);
LGModel ingest_lg_json(const std::string& path);

/// Whole-file read helper; throws ParseError when the file cannot be opened.
std::string read_file(const std::string& path);

/// Atomic text write: writes to `path` + ".tmp", then renames.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace ratefix
