#ifndef PHONOLEARN_H
#define PHONOLEARN_H

/* Generated by the phonolearn-ffi build script; edit src/lib.rs instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum PlStatus {
  PL_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PL_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  PL_STATUS_INVALID_UTF8 = 2,
  /**
   * A file could not be read.
   */
  PL_STATUS_IO = 3,
  /**
   * An inventory, feature system, theory, clause text, or model
   * config failed to parse.
   */
  PL_STATUS_PARSE = 4,
  /**
   * The library panicked; details in `pl_last_message`.
   */
  PL_STATUS_INTERNAL = 5,
} PlStatus;

/**
 * An inventory, its background feature theory, the learned clauses
 * loaded so far, and the sonority reference model. Judging a word
 * proves its affixing events against background + learned clauses.
 */
typedef struct PlWorkbench PlWorkbench;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing this thread's most recent error, or the
 * rejection cause after a judge call that set `*accepted` to false.
 * Empty when the last call fully succeeded. The pointer stays valid
 * until the next phonolearn call on the same thread; never freed by
 * the caller.
 */
const char *pl_last_message(void);

/**
 * Builds a workbench with no learned clauses yet. `inventory` is the
 * bundled name `dutch` or a path to an inventory file;
 * `feature_system` is `ipa`, `booij`, or `sonority`. On success
 * `*out` owns the handle; release it with `pl_workbench_free`.
 */
enum PlStatus pl_workbench_new(const char *inventory,
                               const char *feature_system,
                               struct PlWorkbench **out);

/**
 * Releases a workbench. Null is a no-op. The handle must not be used
 * afterwards.
 */
void pl_workbench_free(struct PlWorkbench *workbench);

/**
 * Appends every clause of a theory file (as written by the CLI's
 * `learn` subcommand) to the workbench. Prefix and suffix theories
 * load into the same workbench one call each.
 */
enum PlStatus pl_workbench_load_theory(struct PlWorkbench *workbench, const char *path);

/**
 * Appends clauses given directly as text, e.g.
 * `"prefix(A,[],C).\nsuffix(A,B,C)."`. Nothing is appended if any
 * clause fails to parse.
 */
enum PlStatus pl_workbench_add_clauses(struct PlWorkbench *workbench, const char *text);

/**
 * Number of learned clauses currently loaded. Null yields 0.
 */
size_t pl_workbench_clause_count(const struct PlWorkbench *workbench);

/**
 * Overrides the resolution-step bound used when judging words. The
 * default matches the CLI default.
 */
enum PlStatus pl_workbench_set_derivation_depth(struct PlWorkbench *workbench, size_t depth);

/**
 * Judges a word, given as space-separated inventory symbols
 * (`"m a : k t"`), against the loaded clauses. On `Ok` with
 * `*accepted == false`, `pl_last_message` names the first affixing
 * event the clauses fail to license (or the template violation).
 */
enum PlStatus pl_workbench_accepts(const struct PlWorkbench *workbench,
                                   const char *word,
                                   bool *accepted);

/**
 * Judges a word with the hand-written sonority model instead of the
 * learned clauses. Rejections leave their cause in `pl_last_message`.
 */
enum PlStatus pl_sonority_accepts(const struct PlWorkbench *workbench,
                                  const char *word,
                                  bool *accepted);

/**
 * Applies `key = value` overrides to the sonority model:
 * `scale.<symbol>`, `license.s`, and `filter.<name>` keys, `#`
 * comments. The model keeps its previous state on error.
 */
enum PlStatus pl_sonority_configure(struct PlWorkbench *workbench, const char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHONOLEARN_H */
