#ifndef FROBSTAT_H
#define FROBSTAT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    FROB_OK = 0,
    FROB_E_DOMAIN = 1,
    FROB_E_SINGULAR = 2,
    FROB_E_PRECONDITION = 3,
    FROB_E_CAP = 4,
    FROB_E_PARSE = 5,
    FROB_E_IO = 6,
    FROB_E_MISSING = 7,
    FROB_E_BAD_PRIME = 8,
    FROB_E_RANGE = 9,
    FROB_E_DEGENERATE = 10,
    FROB_E_CACHE = 11,
    FROB_E_BUDGET = 12,
    FROB_E_INTERNAL = 99
} frob_status;

/* message of the last failing call on this thread */
const char* frob_last_error(void);
const char* frob_version(void);
/* 0 selects the hardware thread count */
void frob_set_threads(unsigned n);
unsigned frob_threads(void);

/* opaque handles */
typedef struct frob_family frob_family;
typedef struct frob_argset frob_argset;
typedef struct frob_sequence frob_sequence;
typedef struct frob_expfam frob_expfam;
typedef struct frob_htable frob_htable;
typedef struct frob_eigen frob_eigen;

/* curves and class numbers */
frob_status frob_kronecker(int64_t a, int64_t n, int* out);
frob_status frob_trace(int64_t a, int64_t b, uint64_t p, int64_t* out);
frob_status frob_class_number(int64_t d, uint64_t* h, unsigned* w);
frob_status frob_hurwitz12(uint64_t n, uint64_t* out);
frob_status frob_deuring_check(uint64_t p, int64_t tau, uint64_t* lhs, uint64_t* rhs_num, uint64_t* rhs_den,
                               int* holds);

frob_status frob_htable_build(uint64_t n, frob_htable** out);
/* path may be NULL for an uncached build */
frob_status frob_htable_load_or_build(const char* path, uint64_t n, frob_htable** out);
frob_status frob_htable_value12(const frob_htable* t, uint64_t n, uint64_t* out);
uint64_t frob_htable_bound(const frob_htable* t);
void frob_htable_free(frob_htable* t);

/* families, argument sets, trace sequences */
frob_status frob_family_parse(const char* spec, frob_family** out);
/* text valid until the next call on this thread */
const char* frob_family_str(const frob_family* f);
uint64_t frob_family_bad_prime_bound(const frob_family* f);
void frob_family_free(frob_family* f);

frob_status frob_argset_parse(const char* spec, frob_argset** out);
uint64_t frob_argset_cardinality(const frob_argset* s);
void frob_argset_free(frob_argset* s);

typedef enum { FROB_SEQ_CONSTANT, FROB_SEQ_EXTREMAL_PLUS, FROB_SEQ_EXTREMAL_MINUS, FROB_SEQ_EXTREMAL_BOTH } frob_seq_kind;
frob_status frob_sequence_make(frob_seq_kind kind, int64_t tau, frob_sequence** out);
/* rows "p,value" */
frob_status frob_sequence_load(const char* path, frob_sequence** out);
int frob_sequence_kind(const frob_sequence* s); /* frob_seq_kind, or -1 for a custom table */
void frob_sequence_free(frob_sequence* s);

frob_status frob_expfam_make(const char* h, unsigned m, unsigned n, int64_t b, frob_expfam** out);
void frob_expfam_free(frob_expfam* e);

/* counting over a strictly increasing x grid; one row per bound */
typedef struct {
    uint64_t x;
    uint64_t total;
    uint64_t excluded_cm;
    uint64_t excluded_singular;
    uint64_t primes_used;
    uint64_t cardinality;
} frob_count_row;

typedef struct {
    uint64_t ups;
    uint64_t om;
    int exclude_cm;
} frob_count_opts;

frob_status frob_avg_single(const frob_argset* s, const frob_family* f, const frob_sequence* a, const uint64_t* xs,
                            size_t nx, frob_count_opts opts, frob_count_row* rows);
frob_status frob_avg_pair(const frob_argset* s, const frob_family* f1, const frob_family* f2, const frob_sequence* a1,
                          const frob_sequence* a2, const uint64_t* xs, size_t nx, frob_count_opts opts, int diagonal,
                          frob_count_row* rows);
frob_status frob_exp_count(const frob_argset* s, const frob_expfam* e, const frob_sequence* a, const uint64_t* xs,
                           size_t nx, frob_count_opts opts, frob_count_row* rows);

typedef struct {
    uint64_t count;
    uint64_t main12; /* 12 (p-1) H(4p - tau^2) */
    double defect;
    double defect_over_p;
} frob_isolam;
frob_status frob_isolam_defect(const frob_expfam* e, int64_t tau, uint64_t p, frob_isolam* out);

frob_status frob_is_permutation_poly(const char* q, uint64_t p, int* out);
frob_status frob_is_near_permutation(const char* q, const char* r, uint64_t p, int* out);

/* constants */
typedef enum { FROB_ONE_CURVE = 1, FROB_TWO_CURVES = 2 } frob_curve_kind;

frob_status frob_char_sum_direct(uint64_t f, uint64_t g, uint64_t m, uint64_t n, int64_t tau, int64_t ups, uint64_t om,
                                 int64_t* out);
frob_status frob_char_sum_local(uint64_t p, unsigned i, unsigned j, unsigned k, unsigned l, int64_t tau, int64_t ups,
                                uint64_t om, int64_t* out);

typedef struct {
    char lambda[160]; /* exact rational "num/den" */
    double value;
    char branch[64];
    int64_t rho0;
    int64_t rho_star;
    unsigned v_omega, v_rho0, v_2tau;
} frob_local_factor;
frob_status frob_local_factor_eval(frob_curve_kind kind, uint64_t p, int64_t tau, int64_t ups, uint64_t om,
                                   frob_local_factor* out);
frob_status frob_local_factor_series(frob_curve_kind kind, uint64_t p, int64_t tau, int64_t ups, uint64_t om,
                                     unsigned max_exp, char* buf, size_t cap);

typedef struct {
    uint64_t p_max;
    char partial_product[64]; /* 30 significant digits */
    char constant[64];
    double constant_value;
    double tail_estimate;
    double fitted_constant;
    double constant_tail;
} frob_euler;
frob_status frob_euler_product(frob_curve_kind kind, int64_t tau, int64_t ups, uint64_t om, uint64_t p_max,
                               frob_euler* out);

frob_status frob_pi_half(double x, double* out);

typedef struct {
    double value;
    uint64_t start_prime;
    uint64_t primes_used;
    uint64_t table_bound;
} frob_hurwitz_avg;
/* table may be NULL */
frob_status frob_hurwitz_avg_eval(const frob_sequence* a, uint64_t x, uint64_t ups, uint64_t om, int moment,
                                  const frob_htable* table, frob_hurwitz_avg* out);

frob_status frob_k_direct(int64_t tau, int64_t ups, uint64_t om, uint64_t F, uint64_t G, uint64_t M, uint64_t N,
                          double* value, double* tail);

/* CLT moments */
typedef enum { FROB_MAP_IDENTITY, FROB_MAP_POLY, FROB_MAP_EXP } frob_map_kind;
typedef struct {
    frob_map_kind kind;
    const char* poly; /* FROB_MAP_POLY */
    int64_t alpha, beta, gamma; /* FROB_MAP_EXP: (alpha n + beta) gamma^n */
} frob_coeff_map;

typedef enum { FROB_PRIMES_ALL, FROB_PRIMES_CONGRUENCE, FROB_PRIMES_LIST } frob_prime_kind;
typedef struct {
    frob_prime_kind kind;
    uint64_t ups, om;
    const uint64_t* primes;
    size_t nprimes;
} frob_prime_set;

typedef struct {
    uint64_t curves;
    uint64_t singular;
    uint64_t pairs;
    uint64_t excluded_isomorphic;
    uint64_t primes;
} frob_moment_info;

/* V must hold r_max doubles; collapsed selects the power-sum path (r_max <= 2) */
frob_status frob_clt_moments(frob_coeff_map phi, frob_coeff_map psi, int64_t A, int64_t B, frob_prime_set P,
                             uint64_t x, unsigned r_max, int collapsed, double budget, double* V,
                             frob_moment_info* info);

frob_status frob_eigen_load(const char* path, frob_eigen** out);
size_t frob_eigen_forms(const frob_eigen* t);
void frob_eigen_free(frob_eigen* t);
/* nprimes = 0 uses every prime up to x */
frob_status frob_eigen_moments(const frob_eigen* t, const uint64_t* primes, size_t nprimes, uint64_t x, unsigned r_max,
                               double* V, frob_moment_info* info);

frob_status frob_h_coeff(unsigned m, unsigned j, int64_t* out);
frob_status frob_s_avg(uint64_t n, double* out);
uint64_t frob_gaussian_moment(unsigned r);

/* oracle comparisons for the module behind a CLI command */
frob_status frob_selftest(const char* command, uint64_t* checks, uint64_t* failures, char* first_failure, size_t cap);

#ifdef __cplusplus
}
#endif

#endif
