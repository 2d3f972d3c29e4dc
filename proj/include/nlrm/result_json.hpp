#pragma once

#include <string>

#include "json.hpp"

#include "nlrm/errors.hpp"
#include "nlrm/nmf.hpp"
#include "nlrm/solver_types.hpp"

namespace nlrm {

inline constexpr int kResultSchema = 1;

/// Timing fields are written as 0 when include_timing is false, which makes
/// the document a pure function of (input, config).
inline nlohmann::json trace_to_json(const IterationTrace& trace, bool include_timing = true) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& rec : trace.records) {
    out.push_back({{"iteration", rec.iteration},
                   {"rel_error", rec.rel_error},
                   {"seconds", include_timing ? rec.seconds : 0.0},
                   {"min_entry", rec.min_entry}});
  }
  return out;
}

inline nlohmann::json result_to_json(const std::string& method, Index rank,
                                     const ApproximationResult& result,
                                     bool include_timing = true) {
  return {{"schema", kResultSchema},
          {"method", method},
          {"rank", rank},
          {"rel_error_x", result.rel_error_x},
          {"rel_error_y", result.rel_error_y},
          {"iters", result.iterations()},
          {"seconds", include_timing ? result.seconds() : 0.0},
          {"converged", result.converged},
          {"degenerate_rank", result.degenerate_rank},
          {"trace", trace_to_json(result.trace, include_timing)}};
}

/// NMF runs have a single error (of B C) reported in both error fields.
inline nlohmann::json result_to_json(const std::string& method, Index rank, const NmfResult& result,
                                     bool include_timing = true) {
  const double seconds = result.trace.empty() ? 0.0 : result.trace.back().seconds;
  return {{"schema", kResultSchema},
          {"method", method},
          {"rank", rank},
          {"rel_error_x", result.rel_error},
          {"rel_error_y", result.rel_error},
          {"iters", result.trace.size()},
          {"seconds", include_timing ? seconds : 0.0},
          {"converged", result.converged},
          {"degenerate_rank", false},
          {"trace", trace_to_json(result.trace, include_timing)}};
}

/**
 * Reads a trace from either a result document (its "trace" member) or a bare
 * array of records. Each record needs "iteration" and "rel_error";
 * "seconds" and "min_entry" default to 0.
 */
inline IterationTrace trace_from_json(const nlohmann::json& doc) {
  const nlohmann::json* records = &doc;
  if (doc.is_object()) {
    if (!doc.contains("trace")) {
      throw ParseError(0, "result document has no 'trace' member");
    }
    records = &doc.at("trace");
  }
  if (!records->is_array()) {
    throw ParseError(0, "trace must be an array of records");
  }

  IterationTrace trace;
  std::size_t index = 0;
  for (const auto& rec : *records) {
    ++index;
    const std::string where = "trace record " + std::to_string(index);
    if (!rec.is_object() || !rec.contains("iteration") || !rec.contains("rel_error")) {
      throw ParseError(0, where + " needs 'iteration' and 'rel_error'");
    }
    const auto& it = rec.at("iteration");
    const auto& err = rec.at("rel_error");
    if (!it.is_number_integer() || it.get<long long>() < 0 || !err.is_number()) {
      throw ParseError(0, where + " has non-numeric fields");
    }
    const auto number_or_zero = [&](const char* key) {
      if (!rec.contains(key)) {
        return 0.0;
      }
      if (!rec.at(key).is_number()) {
        throw ParseError(0, where + ": '" + key + "' is not a number");
      }
      return rec.at(key).get<double>();
    };
    try {
      trace.push({it.get<std::size_t>(), err.get<double>(), number_or_zero("seconds"),
                  number_or_zero("min_entry")});
    } catch (const DomainError& e) {
      throw ParseError(0, where + ": " + e.what());
    }
  }
  return trace;
}

}  // namespace nlrm
