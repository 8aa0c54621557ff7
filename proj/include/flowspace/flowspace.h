// Public C surface of the flowspace library.
//
// Every entry point reports through an fs_status code and never lets an
// exception cross the boundary. String outputs are heap-allocated, owned by
// the caller and released with fs_string_free; on error the optional err
// out-parameter receives a message the same way. Handles are opaque and are
// released with their matching *_free function.

#ifndef FLOWSPACE_FLOWSPACE_H
#define FLOWSPACE_FLOWSPACE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/// Outcome of every call. The values double as process exit codes for the
/// bundled command-line tool: a completed run whose verdict is Fail maps to
/// FS_FAIL, rejected input to FS_ERR_INPUT, and a violated precondition of an
/// otherwise well-formed request to FS_ERR_PRECONDITION.
typedef enum fs_status {
  FS_OK = 0,
  FS_FAIL = 1,
  FS_ERR_INPUT = 2,
  FS_ERR_PRECONDITION = 3,
} fs_status;

/// A finite semicategory of states and composable paths.
typedef struct fs_flow fs_flow;

/// Cell-attachment data over a flow's (g0, g1) path set.
typedef struct fs_attachment fs_attachment;

/// Version string of the library; static storage, do not free.
const char* fs_version(void);

/// Releases a string returned through any out-parameter. NULL is a no-op.
void fs_string_free(char* s);

/// Parses a flow from its JSON description and validates it (totality,
/// endpoints, associativity of the composition table).
///
/// @param[in]  json_text JSON object with "states", "paths" and "compose".
/// @param[out] out       Receives the handle on FS_OK.
/// @param[out] err       Optional; receives a message on failure.
fs_status fs_flow_parse(const char* json_text, fs_flow** out, char** err);

/// Releases a flow handle. NULL is a no-op.
void fs_flow_free(fs_flow* flow);

/// Parses attachment data bound to an existing flow and validates that the
/// attaching map lands in the (g0, g1) path set.
fs_status fs_attachment_parse(const fs_flow* flow, const char* json_text, fs_attachment** out,
                              char** err);

/// Releases an attachment handle. NULL is a no-op.
void fs_attachment_free(fs_attachment* att);

/// Lists every tuple object of degree <= max_degree over the state set given
/// as a comma-separated list, with marked states u and v. The plain listing
/// has one row per object with its degree, height, merge normal form and
/// flag-cleared base; with dot != 0 the output is instead a DOT digraph of
/// the cover relation.
///
/// @param[in]  states_csv Comma-separated state names, e.g. "a,b".
/// @param[in]  u          Name of the marked source state.
/// @param[in]  v          Name of the marked target state.
/// @param[in]  max_degree Enumeration bound, >= 1.
/// @param[in]  dot        0 for the listing, nonzero for DOT output.
/// @param[out] out        Receives the rendered text on FS_OK.
/// @param[out] err        Optional; receives a message on failure.
fs_status fs_enumerate(const char* states_csv, const char* u, const char* v, int max_degree,
                       int dot, char** out, char** err);

/// Glues the attachment's cells onto the flow and reports the result as JSON.
///
/// method selects the construction: "oracle" builds the glued flow by word
/// congruence closure, "reedy" through the colimit of the tuple diagram, and
/// "both" runs the two and compares them class by class. cap bounds the
/// oracle's word length (pass a negative value for no cap; required to
/// terminate on instances that are not loop-free) and is rejected for the
/// other methods. The report always goes to report_out when the run
/// completes; FS_FAIL means the comparison found a mismatch and the report
/// carries the witness.
fs_status fs_pushout_report(const fs_flow* flow, const fs_attachment* att, const char* method,
                            int cap, char** report_out, char** err);

/// Runs the randomized verification suites ("poset", "diagrams", "pushout",
/// "moore" or "all") with the given seed and per-check iteration count. The
/// JSON report depends only on (suite, seed, count), byte for byte. FS_FAIL
/// means at least one check failed; the report carries the witnesses.
fs_status fs_verify_report(const char* suite, uint64_t seed, int count, char** report_out,
                           char** err);

#ifdef __cplusplus
}
#endif

#endif  // FLOWSPACE_FLOWSPACE_H
