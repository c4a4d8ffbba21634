#include "core/json_io.hpp"

#include <algorithm>
#include <set>

#include "core/sha256.hpp"

namespace fgi {

namespace {

const json& need(const json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(ptr + "/" + key, "missing field");
  return *it;
}

int need_int(const json& j, const std::string& key, const std::string& ptr) {
  const json& v = need(j, key, ptr);
  if (!v.is_number_integer()) throw SchemaError(ptr + "/" + key, "expected an integer");
  return v.get<int>();
}

std::string need_str(const json& j, const std::string& key, const std::string& ptr) {
  const json& v = need(j, key, ptr);
  if (!v.is_string()) throw SchemaError(ptr + "/" + key, "expected a string");
  return v.get<std::string>();
}

const json& need_array(const json& j, const std::string& key, const std::string& ptr) {
  const json& v = need(j, key, ptr);
  if (!v.is_array()) throw SchemaError(ptr + "/" + key, "expected an array");
  return v;
}

std::vector<int> int_vector(const json& v, const std::string& ptr) {
  if (!v.is_array()) throw SchemaError(ptr, "expected an array");
  std::vector<int> out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer())
      throw SchemaError(ptr + "/" + std::to_string(i), "expected an integer");
    out.push_back(v[i].get<int>());
  }
  return out;
}

std::vector<std::vector<int>> int_matrix(const json& v, const std::string& ptr) {
  if (!v.is_array()) throw SchemaError(ptr, "expected an array");
  std::vector<std::vector<int>> out;
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(int_vector(v[i], ptr + "/" + std::to_string(i)));
  return out;
}

Mask mask_from_indices(const std::vector<int>& idx, int n, const std::string& ptr) {
  Mask m = 0;
  for (int i : idx) {
    if (i < 1 || i > n) throw SchemaError(ptr, "ground index out of range");
    m |= Mask(1) << (i - 1);
  }
  return m;
}

json mask_to_indices(Mask m) {
  json out = json::array();
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1) out.push_back(i + 1);
  return out;
}

}  // namespace

json make_manifest(const std::string& kind, json payload) {
  return json{{"schema_version", kSchemaVersion}, {"kind", kind},
              {"payload", std::move(payload)}};
}

void check_manifest(const json& m) {
  if (!m.is_object()) throw SchemaError("", "manifest must be an object");
  int v = need_int(m, "schema_version", "");
  if (v != kSchemaVersion) throw SchemaError("/schema_version", "unsupported version");
  static const std::set<std::string> kinds = {
      "groupoid", "functor", "structure", "cocycle", "problem", "linear",
      "extension", "report"};
  std::string kind = need_str(m, "kind", "");
  if (!kinds.count(kind)) throw SchemaError("/kind", "unknown kind: " + kind);
  need(m, "payload", "");
}

std::string manifest_kind(const json& m) {
  check_manifest(m);
  return m["kind"].get<std::string>();
}

// --- groupoid ------------------------------------------------------------------

json groupoid_to_json(const FiniteGroupoid& g) {
  json mor = json::array();
  for (int i = 0; i < g.morphisms(); ++i)
    mor.push_back({{"id", g.ext_id(i)}, {"src", g.src(i)}, {"dst", g.dst(i)}});
  json comp = json::array();
  for (int a = 0; a < g.morphisms(); ++a)
    for (int b = 0; b < g.morphisms(); ++b)
      if (g.compose(a, b) >= 0)
        comp.push_back({g.ext_id(a), g.ext_id(b), g.ext_id(g.compose(a, b))});
  json ident = json::array();
  for (int a = 0; a < g.objects(); ++a)
    ident.push_back({a, g.ext_id(g.identity(a))});
  return json{{"objects", g.objects()},
              {"morphisms", mor},
              {"compose", comp},
              {"identity", ident}};
}

RawGroupoid groupoid_from_json(const json& j, const std::string& ptr) {
  RawGroupoid raw;
  raw.n_objects = need_int(j, "objects", ptr);
  const json& mor = need_array(j, "morphisms", ptr);
  for (size_t i = 0; i < mor.size(); ++i) {
    std::string p = ptr + "/morphisms/" + std::to_string(i);
    raw.morphisms.push_back(
        {need_int(mor[i], "id", p), need_int(mor[i], "src", p), need_int(mor[i], "dst", p)});
  }
  for (const auto& row : int_matrix(need_array(j, "compose", ptr), ptr + "/compose")) {
    if (row.size() != 3) throw SchemaError(ptr + "/compose", "entries are triples");
    raw.compose.push_back({row[0], row[1], row[2]});
  }
  if (j.contains("identity"))
    for (const auto& row : int_matrix(j["identity"], ptr + "/identity")) {
      if (row.size() != 2) throw SchemaError(ptr + "/identity", "entries are pairs");
      raw.identity.push_back({row[0], row[1]});
    }
  return raw;
}

json functor_to_json(const FiniteGroupoid& g, const ConcreteFunctor& f) {
  json actions = json::array();
  for (int m = 0; m < g.morphisms(); ++m)
    actions.push_back({{"id", g.ext_id(m)}, {"map", f.action[m]}});
  return json{{"groupoid", groupoid_to_json(g)},
              {"fibers", f.fiber_size},
              {"actions", actions}};
}

ConcreteFunctor functor_from_json(const FiniteGroupoid& g, const json& j,
                                  const std::string& ptr) {
  ConcreteFunctor f;
  f.fiber_size = int_vector(need_array(j, "fibers", ptr), ptr + "/fibers");
  std::map<int, std::vector<int>> by_id;
  const json& actions = need_array(j, "actions", ptr);
  for (size_t i = 0; i < actions.size(); ++i) {
    std::string p = ptr + "/actions/" + std::to_string(i);
    by_id[need_int(actions[i], "id", p)] =
        int_vector(need_array(actions[i], "map", p), p + "/map");
  }
  for (int m = 0; m < g.morphisms(); ++m) {
    auto it = by_id.find(g.ext_id(m));
    if (it == by_id.end())
      throw SchemaError(ptr + "/actions", "no action for morphism " +
                                              std::to_string(g.ext_id(m)));
    f.action.push_back(it->second);
  }
  return f;
}

// --- structures ------------------------------------------------------------------

json structure_to_json(const FiniteStructure& s) {
  json sorts = json::array(), rels = json::array(), fns = json::array(),
       consts = json::array();
  for (const auto& so : s.sorts) sorts.push_back({{"name", so.name}, {"size", so.size}});
  for (const auto& r : s.relations) {
    json sig = json::array();
    for (int x : r.sorts) sig.push_back(s.sorts[x].name);
    rels.push_back({{"name", r.name}, {"sorts", sig}, {"tuples", r.tuples}});
  }
  for (const auto& f : s.functions) {
    json dom = json::array();
    for (int x : f.domain) dom.push_back(s.sorts[x].name);
    json table = json::array();
    for (const auto& [args, val] : f.table) {
      json row = args;
      row.push_back(val);
      table.push_back(row);
    }
    fns.push_back({{"name", f.name},
                   {"domain", dom},
                   {"codomain", s.sorts[f.codomain].name},
                   {"table", table}});
  }
  for (const auto& c : s.constants)
    consts.push_back({{"name", c.name}, {"sort", s.sorts[c.sort].name}, {"elem", c.elem}});
  return json{{"sorts", sorts}, {"relations", rels}, {"functions", fns},
              {"constants", consts}};
}

FiniteStructure structure_from_json(const json& j, const std::string& ptr) {
  FiniteStructure s;
  const json& sorts = need_array(j, "sorts", ptr);
  for (size_t i = 0; i < sorts.size(); ++i) {
    std::string p = ptr + "/sorts/" + std::to_string(i);
    s.sorts.push_back({need_str(sorts[i], "name", p), need_int(sorts[i], "size", p)});
  }
  auto sort_idx = [&](const std::string& name, const std::string& p) {
    for (size_t i = 0; i < s.sorts.size(); ++i)
      if (s.sorts[i].name == name) return static_cast<int>(i);
    throw SchemaError(p, "unknown sort " + name);
  };
  if (j.contains("relations")) {
    const json& rels = j["relations"];
    for (size_t i = 0; i < rels.size(); ++i) {
      std::string p = ptr + "/relations/" + std::to_string(i);
      FiniteStructure::Relation r;
      r.name = need_str(rels[i], "name", p);
      for (const auto& nm : need_array(rels[i], "sorts", p))
        r.sorts.push_back(sort_idx(nm.get<std::string>(), p + "/sorts"));
      r.tuples = int_matrix(need_array(rels[i], "tuples", p), p + "/tuples");
      s.relations.push_back(r);
    }
  }
  if (j.contains("functions")) {
    const json& fns = j["functions"];
    for (size_t i = 0; i < fns.size(); ++i) {
      std::string p = ptr + "/functions/" + std::to_string(i);
      FiniteStructure::Function f;
      f.name = need_str(fns[i], "name", p);
      for (const auto& nm : need_array(fns[i], "domain", p))
        f.domain.push_back(sort_idx(nm.get<std::string>(), p + "/domain"));
      f.codomain = sort_idx(need_str(fns[i], "codomain", p), p + "/codomain");
      for (const auto& row : int_matrix(need_array(fns[i], "table", p), p + "/table")) {
        if (row.size() != f.domain.size() + 1)
          throw SchemaError(p + "/table", "row arity mismatch");
        std::vector<int> args(row.begin(), row.end() - 1);
        f.table[args] = row.back();
      }
      s.functions.push_back(f);
    }
  }
  if (j.contains("constants")) {
    const json& cs = j["constants"];
    for (size_t i = 0; i < cs.size(); ++i) {
      std::string p = ptr + "/constants/" + std::to_string(i);
      s.constants.push_back({need_str(cs[i], "name", p),
                             sort_idx(need_str(cs[i], "sort", p), p),
                             need_int(cs[i], "elem", p)});
    }
  }
  s.normalize();
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw SchemaError(ptr, std::string("invalid structure: ") + e.what());
  }
  return s;
}

// --- groups and cocycles -----------------------------------------------------------

json group_to_json(const Group& g) {
  json table = json::array();
  for (int a = 0; a < g.order(); ++a) {
    json row = json::array();
    for (int b = 0; b < g.order(); ++b) row.push_back(g.mul(a, b));
    table.push_back(row);
  }
  return table;
}

Group group_from_json(const json& j, const std::string& ptr) {
  try {
    return Group::from_table(int_matrix(j, ptr));
  } catch (const DomainError& e) {
    throw SchemaError(ptr, std::string("invalid group table: ") + e.what());
  }
}

json cocycle_to_json(const CocycleData& d) {
  return json{{"group", group_to_json(d.group)},
              {"kernel", group_to_json(d.kernel)},
              {"carrier_size", d.carrier_size},
              {"action", d.action},
              {"cocycle", d.cocycle}};
}

CocycleData cocycle_from_json(const json& j, const std::string& ptr) {
  CocycleData d;
  d.group = group_from_json(need(j, "group", ptr), ptr + "/group");
  d.kernel = group_from_json(need(j, "kernel", ptr), ptr + "/kernel");
  d.cocycle = int_matrix(need(j, "cocycle", ptr), ptr + "/cocycle");
  if (j.contains("action")) {
    d.carrier_size = need_int(j, "carrier_size", ptr);
    d.action = int_matrix(j["action"], ptr + "/action");
  } else {
    // default: the group acting on itself by right translation
    d.carrier_size = d.group.order();
    d.action.assign(d.group.order(), std::vector<int>(d.group.order()));
    for (int x = 0; x < d.group.order(); ++x)
      for (int g = 0; g < d.group.order(); ++g) d.action[x][g] = d.group.mul(x, g);
  }
  return d;
}

// --- problems -------------------------------------------------------------------

json problem_to_json(const AmalgamationProblem& p) {
  json faces = json::array(), embs = json::array();
  for (const auto& [u, st] : p.faces)
    faces.push_back({{"u", mask_to_indices(u)}, {"structure", structure_to_json(st)}});
  for (const auto& [uv, emb] : p.embeddings)
    embs.push_back({{"from", mask_to_indices(uv.first)},
                    {"to", mask_to_indices(uv.second)},
                    {"map", emb}});
  return json{{"n", p.n}, {"theory", p.theory}, {"q", p.q}, {"faces", faces},
              {"embeddings", embs}};
}

AmalgamationProblem problem_from_json(const json& j, const std::string& ptr) {
  AmalgamationProblem p;
  p.n = need_int(j, "n", ptr);
  p.theory = need_str(j, "theory", ptr);
  p.q = j.contains("q") ? need_int(j, "q", ptr) : 2;
  const json& faces = need_array(j, "faces", ptr);
  for (size_t i = 0; i < faces.size(); ++i) {
    std::string pp = ptr + "/faces/" + std::to_string(i);
    Mask u = mask_from_indices(int_vector(need_array(faces[i], "u", pp), pp + "/u"),
                               p.n, pp + "/u");
    p.faces[u] = structure_from_json(need(faces[i], "structure", pp), pp + "/structure");
  }
  const json& embs = need_array(j, "embeddings", ptr);
  for (size_t i = 0; i < embs.size(); ++i) {
    std::string pp = ptr + "/embeddings/" + std::to_string(i);
    Mask u = mask_from_indices(int_vector(need_array(embs[i], "from", pp), pp), p.n, pp);
    Mask v = mask_from_indices(int_vector(need_array(embs[i], "to", pp), pp), p.n, pp);
    p.embeddings[{u, v}] = int_vector(need_array(embs[i], "map", pp), pp + "/map");
  }
  return p;
}

// --- reports and dispatch ----------------------------------------------------------

namespace {

json make_report(const std::string& op, const json* input, const std::string& summary,
                 json data) {
  json payload{{"operation", op},
               {"version", kToolVersion},
               {"input_hash", input ? sha256_hex(input->dump()) : std::string("none")},
               {"summary", summary},
               {"data", std::move(data)}};
  return make_manifest("report", payload);
}

const json& payload_of_kind(const json& input, const std::string& kind,
                            const std::string& op) {
  check_manifest(input);
  if (input["kind"].get<std::string>() != kind)
    throw SchemaError("/kind", op + " expects a " + kind + " manifest");
  return input["payload"];
}

FiniteGroupoid parse_groupoid_manifest(const json& input, const std::string& op) {
  const json& p = payload_of_kind(input, "groupoid", op);
  return FiniteGroupoid::validate(groupoid_from_json(p, "/payload"));
}

std::vector<GroupoidSymmetry> parse_uniformity(const FiniteGroupoid& g, const json& p) {
  std::vector<GroupoidSymmetry> out;
  if (!p.contains("uniformity")) return out;
  const json& u = p["uniformity"];
  for (size_t i = 0; i < u.size(); ++i) {
    std::string ptr = "/payload/uniformity/" + std::to_string(i);
    GroupoidSymmetry s;
    s.on_objects = int_vector(need_array(u[i], "objects", ptr), ptr + "/objects");
    std::vector<int> by_ext =
        int_vector(need_array(u[i], "morphisms", ptr), ptr + "/morphisms");
    std::map<int, int> ext_to_idx;
    for (int m = 0; m < g.morphisms(); ++m) ext_to_idx[g.ext_id(m)] = m;
    if (static_cast<int>(by_ext.size()) != g.morphisms())
      throw SchemaError(ptr + "/morphisms", "length mismatch");
    s.on_morphisms.resize(g.morphisms());
    for (int m = 0; m < g.morphisms(); ++m)
      s.on_morphisms[m] = ext_to_idx.at(by_ext[m]);
    out.push_back(s);
  }
  return out;
}

json cover_to_manifest_payload(const CoverStructure& cover) {
  json p = structure_to_json(cover_to_structure(cover));
  json cv{{"original_objects", cover.original_objects},
          {"stars", cover.stars},
          {"rho", cover.rho},
          {"j_morphisms", cover.j_morphisms},
          {"fiber_sizes", cover.functor_.fiber_size}};
  if (cover.presentation) cv["presentation"] = cocycle_to_json(*cover.presentation);
  p["cover"] = cv;
  return p;
}

int param_int(const json& params, const std::string& key, int fallback) {
  if (!params.contains(key) || params[key].is_null()) return fallback;
  if (!params[key].is_number_integer())
    throw SchemaError("/params/" + key, "expected an integer");
  return params[key].get<int>();
}

std::string param_str(const json& params, const std::string& key,
                      const std::string& fallback) {
  if (!params.contains(key) || params[key].is_null()) return fallback;
  return params[key].get<std::string>();
}

json solution_to_json(const Solution& sol) {
  json maps = json::array();
  for (const auto& [u, m] : sol.into_top)
    maps.push_back({{"u", mask_to_indices(u)}, {"map", m}});
  return json{{"top", structure_to_json(sol.top)}, {"into_top", maps}};
}

json np_report_to_json(const NPropertyReport& rep) {
  json out{{"n", rep.n},
           {"existence", rep.existence},
           {"uniqueness", rep.uniqueness},
           {"problems_checked", rep.problems_checked},
           {"solution_counts", rep.solution_counts}};
  if (rep.existence_witness)
    out["existence_witness"] = problem_to_json(*rep.existence_witness);
  if (rep.uniqueness_witness)
    out["uniqueness_witness"] = problem_to_json(*rep.uniqueness_witness);
  return out;
}

}  // namespace

bool operation_exists(const std::string& op) {
  static const std::set<std::string> ops = {
      "validate",      "classify",       "quotient",     "collapse",
      "section",       "extend",         "cocycle",      "coboundary",
      "cover",         "attach",         "exact",        "split",
      "amalgam-validate", "amalgam-solve", "amalgam-check", "3ul",
      "auto-solve",    "stepup",         "generate",     "code-subspace",
      "decode-subspace", "flag-tensor",  "code-line",    "code-points",
      "root-torsor"};
  return ops.count(op) > 0;
}

json run_operation(const std::string& op, const json* input, const json& params) {
  if (!operation_exists(op)) throw SchemaError("", "unknown operation " + op);

  if (op == "validate") {
    FiniteGroupoid g = parse_groupoid_manifest(*input, op);
    json data{{"objects", g.objects()}, {"morphisms", g.morphisms()}, {"valid", true}};
    return make_report(op, input, "groupoid is lawful", data);
  }

  if (op == "classify") {
    FiniteGroupoid g = parse_groupoid_manifest(*input, op);
    GroupoidReport rep = classify(g);
    json classes = json::array(), vinfo = json::array();
    for (const auto& c : rep.iso_classes) classes.push_back(c);
    for (const auto& v : rep.vertex_info)
      vinfo.push_back({{"object", v.object},
                       {"order", v.order},
                       {"order_multiset", v.order_multiset},
                       {"name", v.iso_name},
                       {"abelian", v.abelian},
                       {"solvable", v.solvable}});
    json data{{"iso_classes", classes},
              {"vertex_groups", vinfo},
              {"connected", rep.connected},
              {"abelian", rep.abelian},
              {"solvable", rep.solvable}};
    return make_report(op, input,
                       std::to_string(rep.iso_classes.size()) + " iso-class(es)", data);
  }

  if (op == "quotient") {
    const json& p = payload_of_kind(*input, "groupoid", op);
    FiniteGroupoid g = FiniteGroupoid::validate(groupoid_from_json(p, "/payload"));
    if (!p.contains("normal_system"))
      throw SchemaError("/payload/normal_system", "missing field");
    NormalSystem sys;
    std::map<int, int> ext_to_idx;
    for (int m = 0; m < g.morphisms(); ++m) ext_to_idx[g.ext_id(m)] = m;
    for (const auto& row : int_matrix(p["normal_system"], "/payload/normal_system")) {
      std::vector<int> ids;
      for (int e : row) {
        auto it = ext_to_idx.find(e);
        if (it == ext_to_idx.end())
          throw SchemaError("/payload/normal_system", "unknown morphism id");
        ids.push_back(it->second);
      }
      sys.push_back(ids);
    }
    FiniteGroupoid q = quotient_by_normal_system(g, sys);
    json data{{"groupoid", groupoid_to_json(q)}, {"morphisms", q.morphisms()}};
    return make_report(op, input, "quotient has " + std::to_string(q.morphisms()) +
                                      " morphisms", data);
  }

  if (op == "collapse") {
    const json& p = payload_of_kind(*input, "functor", op);
    FiniteGroupoid g =
        FiniteGroupoid::validate(groupoid_from_json(need(p, "groupoid", "/payload"),
                                                    "/payload/groupoid"));
    ConcreteFunctor f = functor_from_json(g, p, "/payload");
    CollapseResult res = collapse_trivial(g, f);
    json data{{"set_size", res.set_size}, {"bijections", res.to_quotient}};
    return make_report(op, input, "collapsed to " + std::to_string(res.set_size) +
                                      " element(s)", data);
  }

  if (op == "section") {
    const json& p = payload_of_kind(*input, "groupoid", op);
    FiniteGroupoid g = FiniteGroupoid::validate(groupoid_from_json(p, "/payload"));
    auto uniformity = parse_uniformity(g, p);
    auto s = find_coherent_section(g, uniformity);
    json data{{"found", s.has_value()},
              {"uniformity_count", uniformity.size()}};
    if (s) {
      json entries = json::array();
      for (int a = 0; a < g.objects(); ++a)
        for (int b = 0; b < g.objects(); ++b)
          entries.push_back({a, b, g.ext_id((*s)[a * g.objects() + b])});
      data["section"] = entries;
    }
    return make_report(op, input, s ? "coherent section found" : "no coherent section",
                       data);
  }

  if (op == "extend") {
    const json& p = payload_of_kind(*input, "extension", op);
    ExtensionInput in;
    in.base = FiniteGroupoid::validate(
        groupoid_from_json(need(p, "base", "/payload"), "/payload/base"));
    in.basepoint = need_int(p, "basepoint", "/payload");
    in.supergroup = group_from_json(need(p, "group", "/payload"), "/payload/group");
    in.embedding = int_vector(need_array(p, "embedding", "/payload"),
                              "/payload/embedding");
    ExtensionResult res = extend_groupoid(in);
    json sizes = json::array();
    for (int a = 0; a < res.groupoid.objects(); ++a) {
      json row = json::array();
      for (int b = 0; b < res.groupoid.objects(); ++b)
        row.push_back(res.groupoid.hom(a, b).size());
      sizes.push_back(row);
    }
    json data{{"groupoid", groupoid_to_json(res.groupoid)},
              {"hom_sizes", sizes},
              {"base_embedding", res.base_embedding}};
    return make_report(op, input, "extension built", data);
  }

  if (op == "cocycle") {
    const json& p = payload_of_kind(*input, "cocycle", op);
    CocycleGroupoid cg = groupoid_from_cocycle(cocycle_from_json(p, "/payload"));
    json data{{"groupoid", groupoid_to_json(cg.groupoid)},
              {"functor", functor_to_json(cg.groupoid, cg.functor_)},
              {"normalization_shifted", cg.data.normalization_shifted}};
    json uni = json::array();
    for (const auto& s : cg.translations) {
      json mor = json::array();
      for (int m : s.on_morphisms) mor.push_back(cg.groupoid.ext_id(m));
      uni.push_back({{"objects", s.on_objects}, {"morphisms", mor}});
    }
    data["uniformity"] = uni;
    return make_report(op, input, "cocycle groupoid built", data);
  }

  if (op == "coboundary") {
    const json& p = payload_of_kind(*input, "cocycle", op);
    CoboundaryResult res = is_coboundary(cocycle_from_json(p, "/payload"));
    json data{{"is_coboundary", res.split}};
    if (res.split) data["witness"] = res.witness;
    return make_report(op, input, res.split ? "cocycle is a coboundary"
                                            : "cocycle is not a coboundary", data);
  }

  if (op == "cover") {
    std::string kind = manifest_kind(*input);
    CoverStructure cover;
    if (kind == "cocycle") {
      const json& p = (*input)["payload"];
      CocycleGroupoid cg = groupoid_from_cocycle(cocycle_from_json(p, "/payload"));
      cover = build_cover(cg);
    } else if (kind == "functor") {
      const json& p = (*input)["payload"];
      FiniteGroupoid g = FiniteGroupoid::validate(
          groupoid_from_json(need(p, "groupoid", "/payload"), "/payload/groupoid"));
      ConcreteFunctor f = functor_from_json(g, p, "/payload");
      cover = build_cover(g, f);
    } else {
      throw SchemaError("/kind", "cover expects a cocycle or functor manifest");
    }
    json data{{"structure", cover_to_manifest_payload(cover)},
              {"objects", cover.groupoid.objects()},
              {"stars", cover.stars}};
    return make_report(op, input, "cover built with " +
                                      std::to_string(cover.stars.size()) + " star(s)",
                       data);
  }

  if (op == "attach") {
    // accepts the report of `cover` or a bare structure payload with a cover block
    const json* p = nullptr;
    std::string base_ptr;
    check_manifest(*input);
    if ((*input)["kind"] == "report") {
      p = &(*input)["payload"]["data"]["structure"];
      base_ptr = "/payload/data/structure";
    } else if ((*input)["kind"] == "structure") {
      p = &(*input)["payload"];
      base_ptr = "/payload";
    } else {
      throw SchemaError("/kind", "attach expects a structure or cover report");
    }
    if (!p->contains("cover"))
      throw SchemaError(base_ptr + "/cover", "missing cover block");
    const json& cv = (*p)["cover"];
    if (!cv.contains("presentation"))
      throw SchemaError(base_ptr + "/cover/presentation",
                        "attachment needs a cocycle presentation");
    CocycleData data = cocycle_from_json(cv["presentation"],
                                         base_ptr + "/cover/presentation");
    CocycleGroupoid cg = groupoid_from_cocycle(data);
    CoverStructure cover = build_cover(cg);
    FiniteStructure base = make_cayley_base(data.group);
    std::vector<int> anchor(cover.original_objects);
    for (int x = 0; x < cover.original_objects; ++x) anchor[x] = x;
    AttachedCover att = attach_to_base(base, cover, anchor);
    json payload = structure_to_json(att.combined);
    payload["base_sorts"] = att.base_sorts;
    json out{{"structure", payload},
             {"elements", att.combined.total_size()}};
    return make_report(op, input, "attached structure with " +
                                      std::to_string(att.combined.total_size()) +
                                      " element(s)", out);
  }

  if (op == "exact" || op == "split") {
    const json* p = nullptr;
    check_manifest(*input);
    if ((*input)["kind"] == "report")
      p = &(*input)["payload"]["data"]["structure"];
    else
      p = &payload_of_kind(*input, "structure", op);
    FiniteStructure n = structure_from_json(*p, "/payload");
    if (!p->contains("base_sorts"))
      throw SchemaError("/payload/base_sorts", "missing base sorts");
    std::vector<std::string> base_sorts;
    for (const auto& s : (*p)["base_sorts"]) base_sorts.push_back(s.get<std::string>());

    SplitReport rep;
    if (op == "exact") {
      rep = check_exact_sequence(n, base_sorts);
    } else {
      int fallback = check_exact_sequence(n, base_sorts).kernel_order;
      rep = is_split(n, base_sorts, param_int(params, "naming_bound", fallback));
    }
    json data{{"total_order", rep.total_order},
              {"kernel_order", rep.kernel_order},
              {"image_order", rep.image_order},
              {"base_aut_order", rep.base_aut_order},
              {"surjective", rep.surjective},
              {"kernel_name", rep.kernel_name},
              {"total_name", rep.total_name},
              {"element_orders", rep.kernel_orders}};
    std::string summary;
    if (op == "split") {
      data["split"] = rep.split;
      data["almost_split"] = rep.almost_split;
      data["naming_bound"] = rep.naming_bound;
      summary = rep.split ? "cover is split" : "cover is not split";
    } else {
      summary = "kernel " + std::to_string(rep.kernel_order) + ", image " +
                std::to_string(rep.image_order);
    }
    return make_report(op, input, summary, data);
  }

  if (op == "amalgam-validate") {
    const json& p = payload_of_kind(*input, "problem", op);
    AmalgamationProblem prob = problem_from_json(p, "/payload");
    validate_problem(prob);
    return make_report(op, input, "problem is well-formed",
                       json{{"n", prob.n}, {"faces", prob.faces.size()}});
  }

  if (op == "amalgam-solve") {
    const json& p = payload_of_kind(*input, "problem", op);
    AmalgamationProblem prob = problem_from_json(p, "/payload");
    SolutionSet sols = solve(prob);
    json arr = json::array();
    for (const auto& s : sols.solutions) arr.push_back(solution_to_json(s));
    json data{{"count", sols.solutions.size()}, {"solutions", arr}};
    return make_report(op, input,
                       std::to_string(sols.solutions.size()) + " solution(s)", data);
  }

  if (op == "amalgam-check") {
    std::string theory = param_str(params, "theory", "");
    if (theory.empty()) throw SchemaError("/params/theory", "missing theory");
    int n = param_int(params, "n", 3);
    int bound = param_int(params, "bound", 16);
    int q = param_int(params, "q", 2);
    auto plugin = make_plugin(theory, q);
    NPropertyReport rep = check_n_property(*plugin, n, bound);
    std::string summary = "existence " + std::string(rep.existence ? "yes" : "NO") +
                          ", uniqueness " + std::string(rep.uniqueness ? "yes" : "NO");
    return make_report(op, input, summary, np_report_to_json(rep));
  }

  if (op == "3ul") {
    const json& p = payload_of_kind(*input, "problem", op);
    AmalgamationProblem prob = problem_from_json(p, "/payload");
    SolutionSet sols = solve(prob);
    json arr = json::array();
    for (const auto& s : sols.solutions) {
      ThreeULReport t = check_3ul(prob, s);
      SUReport su = check_su(prob, s);
      arr.push_back({{"condition1", t.condition1},
                     {"condition2", t.condition2},
                     {"agree", t.agree},
                     {"su_condition3", su.condition3},
                     {"su_condition4", su.condition4},
                     {"su_agree", su.agree}});
    }
    json data{{"solutions", sols.solutions.size()}, {"reports", arr},
              {"unique", sols.solutions.size() == 1}};
    return make_report(op, input, "checked " + std::to_string(sols.solutions.size()) +
                                      " solution(s)", data);
  }

  if (op == "auto-solve") {
    const json& p = payload_of_kind(*input, "problem", op);
    AutomorphicProblem ap;
    ap.problem = problem_from_json(p, "/payload");
    if (!p.contains("sigma")) throw SchemaError("/payload/sigma", "missing sigma family");
    const json& sg = p["sigma"];
    for (size_t i = 0; i < sg.size(); ++i) {
      std::string pp = "/payload/sigma/" + std::to_string(i);
      Mask u = mask_from_indices(int_vector(need_array(sg[i], "u", pp), pp),
                                 ap.problem.n, pp);
      ap.sigma[u] = int_vector(need_array(sg[i], "perm", pp), pp + "/perm");
    }
    AutomorphicResult res = solve_with_automorphism(ap);
    json data{{"solved", res.solved}};
    if (res.solved) {
      data["solution"] = solution_to_json(res.solution);
      data["top_sigma"] = res.top_sigma;
    } else {
      data["failure"] = res.failure;
    }
    return make_report(op, input, res.solved ? "equivariant solution found" : res.failure,
                       data);
  }

  if (op == "stepup") {
    const json& p = payload_of_kind(*input, "problem", op);
    AmalgamationProblem partial = problem_from_json(p, "/payload");
    int n = param_int(params, "n", partial.n - 1);
    int k = partial.n - n;
    auto plugin = make_plugin(partial.theory, partial.q);
    StepUpResult res = stepup_solve(*plugin, partial, n, k);
    json data{{"success", res.success}};
    if (!res.success) data["failed_face"] = mask_to_indices(res.failed_face);
    if (res.success) {
      json faces = json::array();
      for (const auto& [u, st] : res.faces)
        faces.push_back({{"u", mask_to_indices(u)}, {"size", st.total_size()}});
      data["faces"] = faces;
    }
    return make_report(op, input, res.success ? "filled all faces" : "step failed",
                       data);
  }

  if (op == "generate") {
    std::string theory = param_str(params, "theory", "");
    if (theory.empty()) throw SchemaError("/params/theory", "missing theory");
    int n = param_int(params, "n", 3);
    AmalgamationProblem prob;
    if (theory == "pure_set") {
      prob = generate_pure_set(n);
    } else if (theory == "vector_space") {
      prob = generate_vector_space(param_int(params, "q", 2), n);
    } else if (theory == "parity") {
      std::vector<int> bits;
      if (params.contains("parity") && params["parity"].is_array())
        bits = int_vector(params["parity"], "/params/parity");
      prob = generate_parity(n, bits);
    } else {
      throw SchemaError("/params/theory", "unknown theory " + theory);
    }
    return make_report(op, nullptr, "generated " + theory + " problem",
                       json{{"problem", problem_to_json(prob)}});
  }

  // linear operations take a linear manifest or bare params
  auto linear_payload = [&]() -> const json& {
    return payload_of_kind(*input, "linear", op);
  };

  if (op == "code-subspace") {
    const json& p = linear_payload();
    int q = need_int(p, "q", "/payload");
    int ambient = need_int(p, "ambient", "/payload");
    GF f(q);
    Mat vectors = int_matrix(need_array(p, "vectors", "/payload"), "/payload/vectors");
    SubspaceCode code = code_subspace(f, vectors, ambient);
    json data{{"q", q}, {"ambient", ambient}, {"degree", code.degree},
              {"coords", code.coords}};
    return make_report(op, input, "coded a " + std::to_string(code.degree) +
                                      "-dimensional subspace", data);
  }

  if (op == "decode-subspace") {
    const json& p = linear_payload();
    SubspaceCode code;
    code.q = need_int(p, "q", "/payload");
    code.ambient_dim = need_int(p, "ambient", "/payload");
    code.degree = need_int(p, "degree", "/payload");
    code.coords = int_vector(need_array(p, "coords", "/payload"), "/payload/coords");
    GF f(code.q);
    Mat basis = decode_subspace(f, code);
    return make_report(op, input, "decoded subspace", json{{"basis", basis}});
  }

  if (op == "flag-tensor") {
    const json& p = linear_payload();
    int q = need_int(p, "q", "/payload");
    GF f(q);
    FlaggedSpace left = standard_flag(f, need_int(p, "left_dim", "/payload"), "v");
    FlaggedSpace right = standard_flag(f, need_int(p, "right_dim", "/payload"), "w");
    FlaggedSpace prod = flag_tensor(f, left, right);
    json chain = json::array();
    for (const auto& step : prod.flag) chain.push_back(step);
    json data{{"dim", prod.dim}, {"chain", chain}, {"labels", prod.basis_labels}};
    return make_report(op, input, "tensor flag of dimension " + std::to_string(prod.dim),
                       data);
  }

  if (op == "code-line") {
    const json& p = linear_payload();
    int q = need_int(p, "q", "/payload");
    GF f(q);
    FlaggedSpace w = standard_flag(f, need_int(p, "dim", "/payload"), "e");
    Vec gen = int_vector(need_array(p, "generator", "/payload"), "/payload/generator");
    LineCode code = code_flagged_line(f, gen, w);
    json data{{"level", code.level}, {"element", code.element}};
    return make_report(op, input, "line coded at level " + std::to_string(code.level),
                       data);
  }

  if (op == "code-points") {
    const json& p = linear_payload();
    int q = need_int(p, "q", "/payload");
    int nvars = need_int(p, "n", "/payload");
    GF f(q);
    std::vector<Vec> pts;
    for (const auto& row : int_matrix(need_array(p, "points", "/payload"),
                                      "/payload/points"))
      pts.push_back(row);
    int cap = p.contains("degree_cap") ? need_int(p, "degree_cap", "/payload")
                                       : nvars * (q - 1);
    PointSetCode code = code_point_set(f, nvars, pts, cap);
    json data{{"monomial_count", code.monomial_count},
              {"complete", code.complete},
              {"empty", code.code.empty},
              {"degree", code.code.degree}};
    if (!code.code.empty) data["coords"] = code.code.coords;
    return make_report(op, input, "point set coded", data);
  }

  if (op == "root-torsor") {
    int q = param_int(params, "q", 0);
    int m = param_int(params, "m", 0);
    if (input) {
      const json& p = linear_payload();
      q = need_int(p, "q", "/payload");
      m = need_int(p, "m", "/payload");
    }
    if (q <= 0 || m <= 0) throw SchemaError("/params", "root-torsor needs q and m");
    GF f(q);
    RootTorsor t = root_torsor(f, m);
    json data{{"q", q}, {"m", m}, {"class_count", t.class_count},
              {"classes", t.classes}, {"mu_m", t.mu_m}, {"t_map", t.t_map}};
    return make_report(op, input, std::to_string(t.class_count) + " class(es)", data);
  }

  throw SchemaError("", "unhandled operation " + op);
}

}  // namespace fgi
