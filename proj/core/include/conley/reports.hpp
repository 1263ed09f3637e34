#pragma once

// JSON views of the computed objects. Graded spaces are arrays of
// {"degree", "rank"} with zero ranks omitted; infinite times become null.

#include <json.hpp>

#include "conley/continuation.hpp"
#include "conley/ecohomology.hpp"
#include "conley/floer.hpp"
#include "conley/index_pair.hpp"

namespace conley::reports {

using Json = nlohmann::json;

Json to_json(const functional::TruncationLevel& level);
Json to_json(const cubical::GradedZ2Space& space);
Json to_json(const cubical::Grid& grid);
Json to_json(const ecoh::Tower& tower);
Json to_json(const ecoh::ELimit& limit);
Json to_json(const index::IndexPair& pair);
Json to_json(const functional::CriticalPoint& point);
Json to_json(const floer::ConnectionReport& report);
/// Includes the cohomology and the boundary-squared check.
Json to_json(const floer::FloerComplex& complex);
Json to_json(const floer::MainTheoremReport& report);
Json to_json(const floer::ContinuationReport& report);
Json to_json(const floer::SublevelTriple& triple);

}  // namespace conley::reports
