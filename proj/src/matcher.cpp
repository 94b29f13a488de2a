#include "rigidmatch/matcher.hpp"

#include "rigidmatch/errors.hpp"
#include "rigidmatch/oracle.hpp"

namespace rigidmatch {

const char* to_string(Engine engine) {
  switch (engine) {
    case Engine::bp: return "bp";
    case Engine::jt: return "jt";
    case Engine::oracle: return "oracle";
  }
  return "bp";
}

Engine engine_from_string(const std::string& name) {
  if (name == "bp") return Engine::bp;
  if (name == "jt") return Engine::jt;
  if (name == "oracle") return Engine::oracle;
  throw Error(ErrorCode::invalid_parameters, "unknown engine '" + name + "'");
}

MatchResult match(const PointPattern& tmpl, const PointPattern& scene,
                  const MatchOptions& options) {
  const std::size_t n = tmpl.size();
  const std::size_t minimum = options.engine == Engine::bp ? 5 : (options.engine == Engine::jt ? 4 : 1);
  if (n < minimum) {
    MatchResult r = oracle_match(tmpl, scene, options.potentials);
    r.note = std::string("template has ") + std::to_string(n) + " points, below the " +
             to_string(options.engine) + " minimum of " + std::to_string(minimum) +
             "; matched by the brute-force oracle";
    return r;
  }

  switch (options.engine) {
    case Engine::bp: {
      BpOptions bp;
      bp.potentials = options.potentials;
      bp.convergence = options.convergence;
      bp.schedule = options.schedule;
      bp.trace = options.trace;
      return bp_match(tmpl, scene, bp);
    }
    case Engine::jt: {
      const JunctionTree jt = build_junction_tree(build_three_tree(n, options.three_tree_seed));
      return jt_map(tmpl, scene, jt, options.potentials, options.jt);
    }
    case Engine::oracle:
      return oracle_match(tmpl, scene, options.potentials);
  }
  throw Error(ErrorCode::invalid_parameters, "unknown engine");
}

}  // namespace rigidmatch
