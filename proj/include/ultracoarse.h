#ifndef ULTRACOARSE_H
#define ULTRACOARSE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes shared by every call. On any nonzero return uc_last_error()
 * describes the failure; output parameters are left untouched. */
typedef enum {
  UC_OK = 0,
  UC_ERR_INVALID_INPUT = 1,
  UC_ERR_HYPOTHESIS = 2,
  UC_ERR_VERIFICATION = 3,
  UC_ERR_INTERNAL = 4
} uc_status;

/* Message for the most recent failing call on this thread. The pointer is
 * owned by the library and valid until the next failing call. */
const char* uc_last_error(void);

/* Release a string returned through a char** output parameter. */
void uc_string_free(char* s);

/* Opaque handles. */
typedef struct uc_space uc_space;
typedef struct uc_tower uc_tower;

/* ---- spaces ------------------------------------------------------------ */

/* Parses either space flavor: a finite table {"points", "dist"} or a degree
 * sequence {"prefix", "tail"}. */
uc_status uc_space_parse(const char* json_text, uc_space** out);
void uc_space_free(uc_space* s);
uc_status uc_space_to_json(const uc_space* s, char** out_json);

/* Invariant pair as a JSON array ["flat", "sharp"]. */
uc_status uc_space_invariants(const uc_space* s, char** out_json);

/* ---- classification pipelines ------------------------------------------ */

/* Verdict JSON: {"relation", "constructive", "citation", "certificate",
 * "invariants"}. */
uc_status uc_equiv(const uc_space* x, const uc_space* y, uint64_t depth,
                   uint64_t seed, char** out_verdict_json);
uc_status uc_embed(const uc_space* x, const uc_space* y, uint64_t depth,
                   uint64_t seed, char** out_verdict_json);

/* Re-checks a certificate against the two spaces. scales_csv is an optional
 * comma list of rationals ("1,2,5/2"); NULL or "" uses the certificate's own
 * scale column. Always returns a report {"accepted", "failure", "forward",
 * "inverse"}; a rejected certificate is UC_OK with "accepted": false. */
uc_status uc_verify(const char* cert_json, const uc_space* x,
                    const uc_space* y, const char* scales_csv,
                    char** out_report_json);

/* Degree-sequence JSON of the homogeneous model attaining invariants
 * (kappa, kappa); kappa is a cardinal string such as "2" or "aleph1". */
uc_status uc_model(const char* kappa, char** out_degrees_json);

/* ---- towers ------------------------------------------------------------ */

uc_status uc_tower_parse(const char* json_text, uc_tower** out);
void uc_tower_free(uc_tower* t);
uc_status uc_tower_to_json(const uc_tower* t, char** out_json);
uc_status uc_tower_to_dot(const uc_tower* t, char** out_dot);

/* Canonical ball tower of a finite space over the given scales. */
uc_status uc_canonical_tower(const uc_space* s, const char* scales_csv,
                             uc_tower** out);

/* ---- brute-force oracles ------------------------------------------------ */

/* Cross-checks cov against the exhaustive minimal cover on every point and
 * realized scale pair of a finite space. Report JSON: {"checked",
 * "mismatches": [...]}. */
uc_status uc_oracle_space(const uc_space* s, char** out_report_json);

/* Cross-checks deg_bounds against boundary covering numbers on every level
 * pair of an explicit tower. Same report shape. */
uc_status uc_oracle_tower(const uc_tower* t, char** out_report_json);

#ifdef __cplusplus
}
#endif

#endif /* ULTRACOARSE_H */
