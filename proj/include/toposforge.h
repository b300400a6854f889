#ifndef TOPOSFORGE_H
#define TOPOSFORGE_H

/* C interface to the toposforge engine. A session accumulates documents
 * from one or more loads, runs one command at a time and keeps the last
 * report. All returned strings are owned by the session and stay valid
 * until the next call on it or tf_session_free. */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct tf_session tf_session;

const char* tf_version(void);

tf_session* tf_session_new(void);
void tf_session_free(tf_session* s);

/* Both return 0 on success and 2 on invalid input (see tf_last_error). */
int tf_load_string(tf_session* s, const char* text);
int tf_load_file(tf_session* s, const char* path);

/* Runs a command against the loaded documents. depth, max_size and probe
 * take the command defaults when negative. Returns the exit code:
 * 0 all checks pass, 1 a check failed, 2 invalid input. */
int tf_run(tf_session* s, const char* command, int depth, int max_size, int probe);

/* Report of the last tf_run; NULL before the first run. */
const char* tf_report_json(const tf_session* s);
const char* tf_report_text(const tf_session* s);

/* Message of the last failed call, or an empty string. */
const char* tf_last_error(const tf_session* s);

#ifdef __cplusplus
}
#endif

#endif
