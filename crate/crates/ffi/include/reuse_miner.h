#ifndef REUSE_MINER_H
#define REUSE_MINER_H

#include <stdbool.h>
#include <stddef.h>

typedef enum RmStatus {
  RM_STATUS_OK = 0,
  RM_STATUS_NULL_ARGUMENT = 1,
  RM_STATUS_INVALID_UTF8 = 2,
  RM_STATUS_INVALID_ARGUMENT = 3,
  RM_STATUS_IO = 4,
  RM_STATUS_LIBRARY = 5,
  RM_STATUS_NOT_A_REPOSITORY = 6,
  RM_STATUS_GIT = 7,
  RM_STATUS_INTERNAL = 8,
} RmStatus;

/**
 * Result of analysing one repository.
 */
typedef struct RmAnalysis RmAnalysis;

/**
 * Loaded API index.
 */
typedef struct RmIndex RmIndex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library and valid until the next call on the same thread.
 */
const char *rm_last_error(void);

/**
 * Library version as a static string.
 */
const char *rm_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void rm_string_free(char *s);

/**
 * Loads an index written by `reuse-miner mine-libs` (the `index/` directory).
 *
 * # Safety
 * `dir` must be a nul-terminated string, `out` a writable pointer.
 */
enum RmStatus rm_index_load(const char *dir, struct RmIndex **out);

/**
 * Indexes an unpacked source tree as the library `group:artifact:version`.
 *
 * # Safety
 * String arguments must be nul-terminated, `out` a writable pointer.
 */
enum RmStatus rm_index_from_source_tree(const char *source_dir,
                                        const char *coordinate,
                                        struct RmIndex **out);

/**
 * # Safety
 * `index` must be null or a handle from this library, freed once.
 */
void rm_index_free(struct RmIndex *index);

/**
 * Number of public API methods in the index, or 0 for a null handle.
 *
 * # Safety
 * `index` must be null or a live handle.
 */
size_t rm_index_api_count(const struct RmIndex *index);

/**
 * JSON array of the API records with the given simple name.
 *
 * # Safety
 * `index` must be a live handle, `name` nul-terminated, `out` writable.
 */
enum RmStatus rm_index_lookup_json(const struct RmIndex *index, const char *name, char **out);

/**
 * Parses one Java compilation unit and returns its surface as JSON.
 *
 * # Safety
 * `source` and `path` must be nul-terminated, `out` writable.
 */
enum RmStatus rm_parse_java_json(const char *source, const char *path, char **out);

/**
 * Walks the first-parent history of the git repository at `repo_path`.
 * `branch` may be null for the current HEAD.
 *
 * # Safety
 * `index` must be a live handle; strings nul-terminated; `out` writable.
 */
enum RmStatus rm_analyze_repo(const struct RmIndex *index,
                              const char *repo_path,
                              const char *repo_id,
                              const char *branch,
                              struct RmAnalysis **out);

/**
 * # Safety
 * `analysis` must be null or a handle from this library, freed once.
 */
void rm_analysis_free(struct RmAnalysis *analysis);

/**
 * # Safety
 * `analysis` must be null or a live handle.
 */
size_t rm_analysis_commit_count(const struct RmAnalysis *analysis);

/**
 * # Safety
 * `analysis` must be null or a live handle.
 */
size_t rm_analysis_candidate_count(const struct RmAnalysis *analysis);

/**
 * Candidates as JSON lines. With `min_replacements` > 0 only the candidates
 * the selector keeps at that threshold are returned.
 *
 * # Safety
 * `analysis` must be a live handle, `out` writable.
 */
enum RmStatus rm_analysis_candidates_jsonl(const struct RmAnalysis *analysis,
                                           size_t min_replacements,
                                           bool drop_trivial,
                                           char **out);

/**
 * Clusters the analysis candidates into replacement rules, as JSON lines.
 *
 * # Safety
 * `analysis` must be a live handle, `out` writable.
 */
enum RmStatus rm_analysis_rules_jsonl(const struct RmAnalysis *analysis, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REUSE_MINER_H */
