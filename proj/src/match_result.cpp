#include "rigidmatch/match_result.hpp"

namespace rigidmatch {

nlohmann::json to_json(const MatchResult& r, bool include_timing) {
  nlohmann::json doc = {
      {"schema_version", kResultSchemaVersion},
      {"engine", r.engine},
      {"assignment", r.assignment.map},
      {"tie_sets", r.tie_sets},
      {"residual", r.residual},
      {"iterations", r.iterations},
      {"converged", r.converged},
      {"collisions", r.collisions},
      {"clique_agreement", r.clique_agreement},
  };
  if (include_timing) doc["wall_time_s"] = r.wall_time_s;
  if (!r.note.empty()) doc["note"] = r.note;
  return doc;
}

}  // namespace rigidmatch
