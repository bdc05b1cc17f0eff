/* C interface to the transverse-invariant engine.
 *
 * Braids are opaque handles created from the same word grammar as the CLI
 * (whitespace-separated signed generator indices, `FT`, `( ... )^m` groups).
 * Every result is returned as a JSON string allocated by the library and
 * released with transverse_string_free. Functions return TRANSVERSE_OK or an
 * error code; resource-capped verdicts are not errors, they come back as
 * {"verdict": "undecided", ...}.
 */

#ifndef TRANSVERSE_H
#define TRANSVERSE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    TRANSVERSE_OK = 0,
    TRANSVERSE_ERR_NULL = 1,    /* required pointer was NULL */
    TRANSVERSE_ERR_UTF8 = 2,    /* input string is not valid UTF-8 */
    TRANSVERSE_ERR_PARSE = 3,   /* malformed braid word or options JSON */
    TRANSVERSE_ERR_PARAM = 4,   /* parameter out of range (ring, marked, ...) */
    TRANSVERSE_ERR_COMPUTE = 5, /* internal failure */
};

typedef struct TransverseBraid TransverseBraid;

/* Engine/convention identifier (static string; do not free). Cached results
 * keyed by this string are invalidated by convention changes. */
const char *transverse_engine_version(void);

int transverse_braid_new(const char *word, size_t strands, TransverseBraid **out);
void transverse_braid_free(TransverseBraid *braid);

/* Vanishing verdict for psi over ring "gf2", "q", or "z"; max_dim 0 keeps
 * the default graded-piece cap. JSON: {"verdict": "zero" | "nonzero" |
 * "undecided", "certificate": {...}} with the certificate present for zero. */
int transverse_psi(const TransverseBraid *braid, const char *ring,
                   uint64_t max_dim, char **out_json);

/* Reduced psi' verdict over GF2; marked is the marked strand position. */
int transverse_psi_prime(const TransverseBraid *braid, size_t marked,
                         uint64_t max_dim, char **out_json);

/* HOMFLY-PT polynomial: {"terms": [{"a", "z", "c"}...], "a_degree": n,
 * "msl_upper_bound": n}. */
int transverse_homfly(const TransverseBraid *braid, char **out_json);

/* FDTC letter-count window, full-twist pattern, and Dehornoy floor:
 * {"lower", "upper", "pattern", "dehornoy_floor"}. */
int transverse_fdtc(const TransverseBraid *braid, char **out_json);

/* Full obstruction report with the derivation ledger. options_json may be
 * NULL, or an object with any of "rings" (array of ring tags), "psi_prime",
 * "homfly", "fdtc" (booleans), "max_dim" (integer), "cache_dir" (string). */
int transverse_report(const TransverseBraid *braid, const char *options_json,
                      char **out_json);

/* Release any string returned through an out_json parameter. */
void transverse_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* TRANSVERSE_H */
