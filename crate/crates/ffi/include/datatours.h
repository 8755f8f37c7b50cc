#ifndef DATATOURS_H
#define DATATOURS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Output format for `dt_tour_render`.
 */
typedef enum DtFormat {
  DT_FORMAT_JSON = 0,
  DT_FORMAT_MARKDOWN = 1,
  DT_FORMAT_HTML = 2,
} DtFormat;

/*
 Result of every fallible call.
 */
typedef enum DtStatus {
  DT_STATUS_OK = 0,
  /*
   A required pointer argument was NULL.
   */
  DT_STATUS_NULL_POINTER = 1,
  /*
   A string argument was not valid UTF-8.
   */
  DT_STATUS_INVALID_UTF8 = 2,
  /*
   An argument was malformed, such as unparseable action JSON.
   */
  DT_STATUS_INVALID_ARGUMENT = 3,
  /*
   The dataset could not be loaded.
   */
  DT_STATUS_INVALID_DATASET = 4,
  DT_STATUS_UNKNOWN_TOUR = 5,
  /*
   The subject is missing, malformed or does not fit the tour.
   */
  DT_STATUS_INVALID_SUBJECT = 6,
  /*
   The session refused the action and is unchanged.
   */
  DT_STATUS_REJECTED = 7,
  /*
   An internal error was caught at the boundary.
   */
  DT_STATUS_PANIC = 8,
} DtStatus;

/*
 A loaded network dataset.
 */
typedef struct DtGraph DtGraph;

/*
 An interactive tour session over one graph.
 */
typedef struct DtSession DtSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version, static.
 */
const char *dt_version(void);

/*
 Short code of the last error on this thread, such as "HiddenSlide", or
 NULL after a successful call. Valid until the next call on this thread.
 */
const char *dt_last_error_code(void);

/*
 Human-readable message of the last error on this thread, or NULL.
 */
const char *dt_last_error_message(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` is NULL or a string returned by this library and not yet freed.
 */
void dt_string_free(char *s);

/*
 Loads a dataset from a JSON document.

 # Safety
 `json` is a NUL-terminated string; `out` is valid for writes.
 */
enum DtStatus dt_graph_from_json(const char *json, struct DtGraph **out);

/*
 Loads a dataset from a JSON file or a directory holding nodes.csv and
 links.csv. `directed` applies to CSV links.

 # Safety
 `path` is a NUL-terminated string; `out` is valid for writes.
 */
enum DtStatus dt_graph_from_path(const char *path, bool directed, struct DtGraph **out);

/*
 Node and link counts. Either output may be NULL.

 # Safety
 `graph` is a live handle; non-NULL outputs are valid for writes.
 */
enum DtStatus dt_graph_counts(const struct DtGraph *graph, size_t *nodes, size_t *links);

/*
 The dataset as a JSON document, with capabilities and terminology.

 # Safety
 `graph` is a live handle; `out` is valid for writes.
 */
enum DtStatus dt_graph_to_json(const struct DtGraph *graph, char **out);

/*
 Releases a graph. Sessions started on it stay valid. NULL is ignored.

 # Safety
 `graph` is NULL or a handle not yet freed.
 */
void dt_graph_free(struct DtGraph *graph);

/*
 JSON array of the built-in tour ids.

 # Safety
 `out` is valid for writes.
 */
enum DtStatus dt_tour_ids(char **out);

/*
 Renders a whole tour as a static slideshow in `format`, one of `DtFormat`.

 `tour` is a built-in id or a tour template as JSON. `subject` is NULL for
 whole-network tours, or text such as "node:ID", "pair:A,B",
 "subgraph:A,B,C", "subgraphs:A,B|C,D", "path:A,B,C" or subject JSON.

 # Safety
 `graph` is a live handle; `tour` and non-NULL `subject` are NUL-terminated
 strings; `out` is valid for writes.
 */
enum DtStatus dt_tour_render(const struct DtGraph *graph,
                             const char *tour,
                             const char *subject,
                             uint64_t seed,
                             uint32_t format,
                             char **out);

/*
 Starts a session on a built-in tour. `subject` follows `dt_tour_render`.

 # Safety
 `graph` is a live handle; `tour` and non-NULL `subject` are NUL-terminated
 strings; `out` is valid for writes.
 */
enum DtStatus dt_session_start(const struct DtGraph *graph,
                               const char *tour,
                               const char *subject,
                               uint64_t seed,
                               struct DtSession **out);

/*
 Rebuilds a session from the JSON event log of `dt_session_events`.

 # Safety
 `graph` is a live handle; `events` is a NUL-terminated string; `out` is
 valid for writes.
 */
enum DtStatus dt_session_replay(const struct DtGraph *graph,
                                const char *events,
                                struct DtSession **out);

/*
 Applies one action given as JSON, for example `{"event": "next"}` or
 `{"event": "jumpTo", "params": {"slide": "overall.density#1"}}`. A rejected
 action leaves the session unchanged. When `out` is not NULL it receives
 the session state with an `outcome` member.

 # Safety
 `session` is a live handle; `action` is a NUL-terminated string; `out` is
 NULL or valid for writes.
 */
enum DtStatus dt_session_act(struct DtSession *session, const char *action, char **out);

/*
 The current session state as JSON.

 # Safety
 `session` is a live handle; `out` is valid for writes.
 */
enum DtStatus dt_session_state(struct DtSession *session, char **out);

/*
 The session's event log as a JSON array.

 # Safety
 `session` is a live handle; `out` is valid for writes.
 */
enum DtStatus dt_session_events(struct DtSession *session, char **out);

/*
 Releases a session. NULL is ignored.

 # Safety
 `session` is NULL or a handle not yet freed.
 */
void dt_session_free(struct DtSession *session);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DATATOURS_H */
