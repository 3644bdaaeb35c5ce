#ifndef IE_CORE_H
#define IE_CORE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes of every fallible call.
typedef enum IeStatus {
  IE_STATUS_OK = 0,
  IE_STATUS_NULL_ARGUMENT = 1,
  IE_STATUS_INVALID_UTF8 = 2,
  IE_STATUS_INVALID_KB = 3,
  IE_STATUS_INVALID_CONFIG = 4,
  IE_STATUS_NO_MATCH = 5,
  IE_STATUS_INTERNAL = 6,
} IeStatus;

// A loaded and validated knowledge base.
typedef struct IeKb IeKb;

// A pipeline configuration validated against one knowledge base.
typedef struct IePipeline IePipeline;

// The result of running the pipeline on one document.
typedef struct IeResult IeResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next library call on the same thread.
const char *ie_last_error(void);

// Library version, a static string.
const char *ie_version(void);

// Loads the knowledge base in directory `dir`.
//
// # Safety
// `dir` must be a NUL-terminated string and `out` a valid pointer.
enum IeStatus ie_kb_load(const char *dir, struct IeKb **out);

// # Safety
// `kb` must come from [`ie_kb_load`] and not be used afterwards.
void ie_kb_free(struct IeKb *kb);

// Number of fragment grammars in `kb`, 0 for null.
//
// # Safety
// `kb` must be null or a live handle.
size_t ie_kb_grammar_count(const struct IeKb *kb);

// Parses a TOML pipeline configuration and validates it against `kb`.
//
// # Safety
// `kb` must be a live handle, `toml` NUL-terminated, `out` valid.
enum IeStatus ie_pipeline_parse(const struct IeKb *kb, const char *toml, struct IePipeline **out);

// Like [`ie_pipeline_parse`], reading the configuration from `path`.
//
// # Safety
// `kb` must be a live handle, `path` NUL-terminated, `out` valid.
enum IeStatus ie_pipeline_load(const struct IeKb *kb, const char *path, struct IePipeline **out);

// # Safety
// `pipeline` must come from this library and not be used afterwards.
void ie_pipeline_free(struct IePipeline *pipeline);

// Runs the pipeline over `text`. The pipeline must have been created
// from the same knowledge base.
//
// # Safety
// Handles must be live, strings NUL-terminated, `out` valid.
enum IeStatus ie_run(const struct IeKb *kb,
                     const struct IePipeline *pipeline,
                     const char *id,
                     const char *text,
                     struct IeResult **out);

// # Safety
// `result` must come from [`ie_run`] and not be used afterwards.
void ie_result_free(struct IeResult *result);

// Number of cached items in `result`, 0 for null.
//
// # Safety
// `result` must be null or a live handle.
size_t ie_result_item_count(const struct IeResult *result);

// Number of templates in `result`, 0 for null.
//
// # Safety
// `result` must be null or a live handle.
size_t ie_result_template_count(const struct IeResult *result);

// Writes the JSON rendering of `result` to `*out`.
//
// # Safety
// `result` must be a live handle and `out` valid.
enum IeStatus ie_result_json(const struct IeResult *result, char **out);

// Writes a self-contained HTML page for `result` to `*out`.
//
// # Safety
// `result` must be a live handle and `out` valid.
enum IeStatus ie_result_html(const struct IeResult *result, char **out);

// Normalizes a date surface (`1.3.96`, `21. Oktober`) to a JSON object.
//
// # Safety
// `surface` must be NUL-terminated and `out` valid.
enum IeStatus ie_normalize_date(const char *surface, char **out);

// Normalizes a time surface (`13:15 h`) to a JSON object.
//
// # Safety
// `surface` must be NUL-terminated and `out` valid.
enum IeStatus ie_normalize_time(const char *surface, char **out);

// # Safety
// `s` must be null or a string returned by this library.
void ie_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IE_CORE_H */
