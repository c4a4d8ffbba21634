#pragma once

#include <optional>
#include <string>

#include "core/amalgam.hpp"
#include "core/cover.hpp"
#include "core/error.hpp"
#include "core/extension.hpp"
#include "core/groupoid.hpp"
#include "core/linear.hpp"
#include "core/structure.hpp"

namespace fgi {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// --- manifests ---------------------------------------------------------------

json make_manifest(const std::string& kind, json payload);
// checks schema_version / kind / payload shape; throws SchemaError
void check_manifest(const json& m);
std::string manifest_kind(const json& m);

// --- payload codecs ----------------------------------------------------------

json groupoid_to_json(const FiniteGroupoid& g);
RawGroupoid groupoid_from_json(const json& j, const std::string& ptr);

json functor_to_json(const FiniteGroupoid& g, const ConcreteFunctor& f);
ConcreteFunctor functor_from_json(const FiniteGroupoid& g, const json& j,
                                  const std::string& ptr);

json structure_to_json(const FiniteStructure& s);
FiniteStructure structure_from_json(const json& j, const std::string& ptr);

json cocycle_to_json(const CocycleData& d);
CocycleData cocycle_from_json(const json& j, const std::string& ptr);

json problem_to_json(const AmalgamationProblem& p);
AmalgamationProblem problem_from_json(const json& j, const std::string& ptr);

json group_to_json(const Group& g);
Group group_from_json(const json& j, const std::string& ptr);

// --- operations ----------------------------------------------------------------

// Runs one named operation; `input` is the parsed input manifest (may be
// null for generate/root-torsor) and `params` carries the CLI flags. The
// result is a report manifest embedding the tool version and input hash.
json run_operation(const std::string& op, const json* input, const json& params);

bool operation_exists(const std::string& op);

}  // namespace fgi
