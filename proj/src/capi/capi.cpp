#include "fgi/fgi.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "core/json_io.hpp"

using fgi::json;

struct fgi_manifest {
  json doc;
};

struct fgi_error {
  int code = FGI_E_INTERNAL;
  std::string name;
  std::string message;
  std::string pointer;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(malloc(s.size() + 1));
  memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(fgi_error** err, int code, std::string name, std::string message,
               std::string pointer = "") {
  if (!err) return;
  auto* e = new fgi_error;
  e->code = code;
  e->name = std::move(name);
  e->message = std::move(message);
  e->pointer = std::move(pointer);
  *err = e;
}

template <typename Fn>
auto guarded(fgi_error** err, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const fgi::SchemaError& e) {
    set_error(err, FGI_E_SCHEMA, "SchemaError", e.what(), e.pointer());
  } catch (const fgi::DomainError& e) {
    set_error(err, FGI_E_DOMAIN, e.name(), e.what(), e.witness().dump());
  } catch (const std::exception& e) {
    set_error(err, FGI_E_INTERNAL, "InternalError", e.what());
  }
  return nullptr;
}

}  // namespace

extern "C" {

const char* fgi_version(void) { return fgi::kToolVersion; }

fgi_manifest* fgi_manifest_parse(const char* json_text, fgi_error** err) {
  return guarded(err, [&]() -> fgi_manifest* {
    json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) throw fgi::SchemaError("", "not valid JSON");
    fgi::check_manifest(doc);
    return new fgi_manifest{std::move(doc)};
  });
}

fgi_manifest* fgi_manifest_read_file(const char* path, fgi_error** err) {
  return guarded(err, [&]() -> fgi_manifest* {
    std::ifstream in(path);
    if (!in) throw fgi::SchemaError("", std::string("cannot read ") + path);
    std::stringstream buf;
    buf << in.rdbuf();
    json doc = json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded()) throw fgi::SchemaError("", "not valid JSON");
    fgi::check_manifest(doc);
    return new fgi_manifest{std::move(doc)};
  });
}

char* fgi_manifest_to_json(const fgi_manifest* m, int pretty) {
  if (!m) return nullptr;
  return dup_string(pretty ? m->doc.dump(2) : m->doc.dump());
}

const char* fgi_manifest_kind(const fgi_manifest* m) {
  if (!m) return nullptr;
  static thread_local std::string kind;
  kind = m->doc.value("kind", "");
  return kind.c_str();
}

void fgi_manifest_free(fgi_manifest* m) { delete m; }

fgi_manifest* fgi_op(const char* op, const fgi_manifest* input,
                     const char* params_json, fgi_error** err) {
  return guarded(err, [&]() -> fgi_manifest* {
    json params = json::object();
    if (params_json && *params_json) {
      params = json::parse(params_json, nullptr, false);
      if (params.is_discarded())
        throw fgi::SchemaError("/params", "params are not valid JSON");
    }
    json report =
        fgi::run_operation(op, input ? &input->doc : nullptr, params);
    return new fgi_manifest{std::move(report)};
  });
}

char* fgi_report_summary(const fgi_manifest* report) {
  if (!report) return nullptr;
  if (!report->doc.contains("payload")) return nullptr;
  const auto& p = report->doc["payload"];
  if (!p.contains("summary")) return nullptr;
  return dup_string(p["summary"].get<std::string>());
}

int fgi_error_code(const fgi_error* e) { return e ? e->code : FGI_E_INTERNAL; }
const char* fgi_error_name(const fgi_error* e) { return e ? e->name.c_str() : ""; }
const char* fgi_error_message(const fgi_error* e) {
  return e ? e->message.c_str() : "";
}
const char* fgi_error_pointer(const fgi_error* e) {
  return e ? e->pointer.c_str() : "";
}
void fgi_error_free(fgi_error* e) { delete e; }

void fgi_string_free(char* s) { free(s); }

}  // extern "C"
