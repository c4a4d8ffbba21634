/* fgi -- finite groupoids, internal covers, amalgamation, linear imaginaries.
 *
 * C interface over the shared library. All objects are opaque handles;
 * functions that can fail take an fgi_error** out-parameter, which is set to
 * a new error object on failure (free with fgi_error_free). Strings returned
 * as char* are owned by the caller and released with fgi_string_free.
 */
#ifndef FGI_H
#define FGI_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fgi_manifest fgi_manifest;
typedef struct fgi_error fgi_error;

/* status codes */
enum {
  FGI_OK = 0,
  FGI_E_DOMAIN = 1, /* lawful input refused by a domain check */
  FGI_E_SCHEMA = 2, /* malformed manifest */
  FGI_E_INTERNAL = 3
};

const char* fgi_version(void);

/* manifest lifecycle */
fgi_manifest* fgi_manifest_parse(const char* json_text, fgi_error** err);
fgi_manifest* fgi_manifest_read_file(const char* path, fgi_error** err);
char* fgi_manifest_to_json(const fgi_manifest* m, int pretty);
const char* fgi_manifest_kind(const fgi_manifest* m);
void fgi_manifest_free(fgi_manifest* m);

/* Runs one named operation (the CLI subcommand names). `input` may be NULL
 * for operations that take none (generate; root-torsor with params).
 * `params_json` is NULL or a JSON object of flag values, e.g.
 * {"naming_bound":2} or {"theory":"parity","n":3,"bound":8}. */
fgi_manifest* fgi_op(const char* op, const fgi_manifest* input,
                     const char* params_json, fgi_error** err);

/* convenience: the human summary line of a report manifest, or NULL */
char* fgi_report_summary(const fgi_manifest* report);

/* error accessors */
int fgi_error_code(const fgi_error* e);
const char* fgi_error_name(const fgi_error* e);
const char* fgi_error_message(const fgi_error* e);
const char* fgi_error_pointer(const fgi_error* e);
void fgi_error_free(fgi_error* e);

void fgi_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* FGI_H */
