// Command-line front end; every operation is reachable as a subcommand over
// JSON manifest files. Links only the shared library's C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fgi/fgi.h"

namespace {

struct Options {
  std::string in_path;
  std::string out_path;
  int naming_bound = -1;
  std::string theory;
  int n = -1;
  int bound = -1;
  int q = -1;
  int m = -1;
  int degree_cap = -1;
  std::string parity_bits;
};

std::string params_json(const Options& opt) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  auto put_int = [&](const char* key, int v) {
    if (v < 0) return;
    os << (first ? "" : ",") << "\"" << key << "\":" << v;
    first = false;
  };
  auto put_str = [&](const char* key, const std::string& v) {
    if (v.empty()) return;
    os << (first ? "" : ",") << "\"" << key << "\":\"" << v << "\"";
    first = false;
  };
  put_int("naming_bound", opt.naming_bound);
  put_str("theory", opt.theory);
  put_int("n", opt.n);
  put_int("bound", opt.bound);
  put_int("q", opt.q);
  put_int("m", opt.m);
  put_int("degree_cap", opt.degree_cap);
  if (!opt.parity_bits.empty()) {
    os << (first ? "" : ",") << "\"parity\":[";
    for (size_t i = 0; i < opt.parity_bits.size(); ++i)
      os << (i ? "," : "") << (opt.parity_bits[i] == '1' ? 1 : 0);
    os << "]";
    first = false;
  }
  os << "}";
  return os.str();
}

int report_error(const char* stage, fgi_error* err) {
  int code = fgi_error_code(err);
  std::cerr << stage << ": " << fgi_error_name(err) << ": " << fgi_error_message(err);
  if (code == FGI_E_SCHEMA && fgi_error_pointer(err)[0])
    std::cerr << " (at " << fgi_error_pointer(err) << ")";
  std::cerr << "\n";
  fgi_error_free(err);
  return code == FGI_E_SCHEMA ? 2 : 1;
}

int run(const std::string& op, const Options& opt, bool needs_input) {
  fgi_error* err = nullptr;
  fgi_manifest* input = nullptr;
  if (!opt.in_path.empty()) {
    input = fgi_manifest_read_file(opt.in_path.c_str(), &err);
    if (!input) return report_error("input", err);
  } else if (needs_input) {
    std::cerr << op << ": missing --in\n";
    return 2;
  }

  std::string params = params_json(opt);
  fgi_manifest* report = fgi_op(op.c_str(), input, params.c_str(), &err);
  if (input) fgi_manifest_free(input);
  if (!report) return report_error(op.c_str(), err);

  char* text = fgi_manifest_to_json(report, 1);
  char* summary = fgi_report_summary(report);
  if (summary) {
    std::cout << op << ": " << summary << "\n";
    fgi_string_free(summary);
  }
  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path);
    out << text << "\n";
  } else {
    std::cout << text << "\n";
  }
  fgi_string_free(text);
  fgi_manifest_free(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite groupoids, covers, amalgamation, and linear imaginaries"};
  app.set_version_flag("--version", std::string(fgi_version()));
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    bool needs_input;
  };
  const std::vector<Sub> subs = {
      {"validate", "validate groupoid tables", true},
      {"classify", "iso-classes, vertex groups, flags", true},
      {"quotient", "quotient by a normal subgroup system", true},
      {"collapse", "collapse a trivial connected groupoid", true},
      {"section", "search for a coherent section", true},
      {"extend", "canonical extension along a supergroup", true},
      {"cocycle", "build the twisted groupoid of a cocycle", true},
      {"coboundary", "decide whether a cocycle splits", true},
      {"cover", "build the cover with one new object per class", true},
      {"attach", "attach a cover to its Cayley base", true},
      {"exact", "kernel and image of the automorphism restriction", true},
      {"split", "decide splitness of an attached cover", true},
      {"amalgam-validate", "check an amalgamation problem", true},
      {"amalgam-solve", "enumerate solutions of a problem", true},
      {"amalgam-check", "n-existence / n-uniqueness over a theory", false},
      {"3ul", "two-condition check on solved 3-problems", true},
      {"auto-solve", "amalgamation with a compatible automorphism family", true},
      {"stepup", "fill large faces from small ones", true},
      {"generate", "emit a built-in problem instance", false},
      {"code-subspace", "Pluecker code of a subspace", true},
      {"decode-subspace", "recover a subspace from its code", true},
      {"flag-tensor", "tensor product of standard flags", true},
      {"code-line", "element code of a line in a flagged space", true},
      {"code-points", "vanishing-ideal code of a point set", true},
      {"root-torsor", "m-th power classes of a one-dimensional space", false},
  };

  Options opt;
  std::vector<std::pair<CLI::App*, const Sub*>> cmds;
  for (const auto& sub : subs) {
    CLI::App* c = app.add_subcommand(sub.name, sub.help);
    c->add_option("--in", opt.in_path, "input manifest file");
    c->add_option("--out", opt.out_path, "write the JSON report here");
    c->add_option("--naming-bound", opt.naming_bound, "orbit bound for almost-split");
    c->add_option("--theory", opt.theory, "pure_set | vector_space | parity");
    c->add_option("--n", opt.n, "dimension / ground size");
    c->add_option("--bound", opt.bound, "instance size bound");
    c->add_option("--q", opt.q, "field order");
    c->add_option("--m", opt.m, "root exponent");
    c->add_option("--degree-cap", opt.degree_cap, "polynomial degree cap");
    c->add_option("--parity", opt.parity_bits, "parity bits, e.g. 0110");
    cmds.push_back({c, &sub});
  }

  CLI11_PARSE(app, argc, argv);
  for (const auto& [cmd, sub] : cmds)
    if (cmd->parsed()) return run(sub->name, opt, sub->needs_input);
  return 2;
}
