#include "frobstat/frobstat.h"

#include <cstring>
#include <memory>
#include <optional>
#include <sstream>

#include "frobstat/classnum.hpp"
#include "frobstat/clt.hpp"
#include "frobstat/constants.hpp"
#include "frobstat/counting.hpp"
#include "frobstat/families.hpp"
#include "frobstat/ffcurve.hpp"
#include "frobstat/parallel.hpp"
#include "frobstat/selftest.hpp"

using namespace frobstat;

struct frob_family {
    curve_family f;
};
struct frob_argset {
    argument_set s;
};
struct frob_sequence {
    trace_sequence s;
};
struct frob_expfam {
    exponential_family e;
};
struct frob_htable {
    hurwitz_table t;
};
struct frob_eigen {
    eigenvalue_table t;
};

namespace {

thread_local std::string last_error;
thread_local std::string text_buf;

template <class F>
frob_status guard(F&& body) {
    try {
        body();
        last_error.clear();
        return FROB_OK;
    } catch (const error& e) {
        last_error = e.what();
        return (frob_status)e.code();
    } catch (const std::exception& e) {
        last_error = e.what();
        return FROB_E_INTERNAL;
    }
}

void need(const void* p) {
    if (!p) throw error(errc::domain, "null argument");
}

void copy_text(const std::string& s, char* buf, std::size_t cap) {
    if (!buf || cap == 0) return;
    std::size_t n = std::min(s.size(), cap - 1);
    std::memcpy(buf, s.data(), n);
    buf[n] = 0;
}

std::string rat_str(const rational& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << "/" << denominator(q);
    return os.str();
}

std::string real_str(const real& v) {
    std::ostringstream os;
    os.precision(30);
    os << v;
    return os.str();
}

count_options opts_of(frob_count_opts o) {
    count_options c;
    c.cc.ups = o.ups;
    c.cc.om = o.om;
    c.exclude_cm = o.exclude_cm != 0;
    return c;
}

void fill_rows(const std::vector<count_report>& reps, frob_count_row* rows) {
    for (std::size_t i = 0; i < reps.size(); ++i)
        rows[i] = {reps[i].x, reps[i].total, reps[i].excluded_cm, reps[i].excluded_singular, reps[i].primes_used,
                   reps[i].cardinality};
}

coeff_map map_of(const frob_coeff_map& m) {
    coeff_map c;
    switch (m.kind) {
        case FROB_MAP_IDENTITY: c.k = coeff_map::kind::identity; break;
        case FROB_MAP_POLY:
            need(m.poly);
            c.k = coeff_map::kind::polynomial;
            c.q = parse_poly(m.poly);
            break;
        case FROB_MAP_EXP:
            c.k = coeff_map::kind::exponential;
            c.alpha = m.alpha;
            c.beta = m.beta;
            c.gamma = m.gamma;
            break;
        default: throw error(errc::domain, "unknown coefficient map kind");
    }
    return c;
}

prime_set primes_of(const frob_prime_set& P) {
    prime_set s;
    switch (P.kind) {
        case FROB_PRIMES_ALL: s.k = prime_set::kind::all; break;
        case FROB_PRIMES_CONGRUENCE:
            if (P.om == 0 || gcd(P.ups % P.om, P.om) != 1)
                throw error(errc::domain, "prime congruence class needs gcd(upsilon, omega) = 1");
            s.k = prime_set::kind::congruence;
            s.ups = P.ups;
            s.om = P.om;
            break;
        case FROB_PRIMES_LIST:
            if (P.nprimes) need(P.primes);
            s.k = prime_set::kind::list;
            s.primes.assign(P.primes, P.primes + P.nprimes);
            break;
        default: throw error(errc::domain, "unknown prime set kind");
    }
    return s;
}

void fill_info(const moment_report& r, frob_moment_info* info) {
    if (!info) return;
    *info = {r.curves, r.singular, r.pair_count, r.excluded_isomorphic, r.primes};
}

curve_kind kind_of(frob_curve_kind k) {
    if (k == FROB_ONE_CURVE) return curve_kind::one;
    if (k == FROB_TWO_CURVES) return curve_kind::two;
    throw error(errc::domain, "curve kind must be one or two");
}

}  // namespace

extern "C" {

const char* frob_last_error(void) { return last_error.c_str(); }
const char* frob_version(void) { return "0.1.0"; }
void frob_set_threads(unsigned n) { set_thread_count(n); }
unsigned frob_threads(void) { return thread_count(); }

frob_status frob_kronecker(int64_t a, int64_t n, int* out) {
    return guard([&] {
        need(out);
        *out = kronecker(a, n);
    });
}

frob_status frob_trace(int64_t a, int64_t b, uint64_t p, int64_t* out) {
    return guard([&] {
        need(out);
        *out = curve_trace(a, b, p);
    });
}

frob_status frob_class_number(int64_t d, uint64_t* h, unsigned* w) {
    return guard([&] {
        need(h);
        need(w);
        auto r = class_number(d);
        *h = r.h;
        *w = r.w;
    });
}

frob_status frob_hurwitz12(uint64_t n, uint64_t* out) {
    return guard([&] {
        need(out);
        *out = hurwitz12(n);
    });
}

frob_status frob_deuring_check(uint64_t p, int64_t tau, uint64_t* lhs, uint64_t* rhs_num, uint64_t* rhs_den,
                               int* holds) {
    return guard([&] {
        need(lhs);
        need(rhs_num);
        need(rhs_den);
        need(holds);
        auto r = deuring_check(p, tau);
        *lhs = r.lhs;
        *rhs_num = numerator(r.rhs).convert_to<u64>();
        *rhs_den = denominator(r.rhs).convert_to<u64>();
        *holds = r.holds;
    });
}

frob_status frob_htable_build(uint64_t n, frob_htable** out) {
    return guard([&] {
        need(out);
        *out = new frob_htable{hurwitz_table::build(n)};
    });
}

frob_status frob_htable_load_or_build(const char* path, uint64_t n, frob_htable** out) {
    return guard([&] {
        need(out);
        *out = new frob_htable{path ? hurwitz_table::load_or_build(path, n) : hurwitz_table::build(n)};
    });
}

frob_status frob_htable_value12(const frob_htable* t, uint64_t n, uint64_t* out) {
    return guard([&] {
        need(t);
        need(out);
        *out = t->t.value12(n);
    });
}

uint64_t frob_htable_bound(const frob_htable* t) { return t ? t->t.bound() : 0; }
void frob_htable_free(frob_htable* t) { delete t; }

frob_status frob_family_parse(const char* spec, frob_family** out) {
    return guard([&] {
        need(spec);
        need(out);
        *out = new frob_family{curve_family::parse(spec)};
    });
}

const char* frob_family_str(const frob_family* f) {
    text_buf = f ? f->f.str() : "";
    return text_buf.c_str();
}

uint64_t frob_family_bad_prime_bound(const frob_family* f) { return f ? f->f.bad_prime_bound() : 0; }
void frob_family_free(frob_family* f) { delete f; }

frob_status frob_argset_parse(const char* spec, frob_argset** out) {
    return guard([&] {
        need(spec);
        need(out);
        *out = new frob_argset{argument_set::parse(spec)};
    });
}

uint64_t frob_argset_cardinality(const frob_argset* s) { return s ? s->s.cardinality() : 0; }
void frob_argset_free(frob_argset* s) { delete s; }

frob_status frob_sequence_make(frob_seq_kind kind, int64_t tau, frob_sequence** out) {
    return guard([&] {
        need(out);
        switch (kind) {
            case FROB_SEQ_CONSTANT: *out = new frob_sequence{trace_sequence::constant(tau)}; break;
            case FROB_SEQ_EXTREMAL_PLUS: *out = new frob_sequence{trace_sequence::extremal(seq_kind::extremal_plus)}; break;
            case FROB_SEQ_EXTREMAL_MINUS: *out = new frob_sequence{trace_sequence::extremal(seq_kind::extremal_minus)}; break;
            case FROB_SEQ_EXTREMAL_BOTH: *out = new frob_sequence{trace_sequence::extremal(seq_kind::extremal_both)}; break;
            default: throw error(errc::domain, "unknown sequence kind");
        }
    });
}

frob_status frob_sequence_load(const char* path, frob_sequence** out) {
    return guard([&] {
        need(path);
        need(out);
        *out = new frob_sequence{trace_sequence::from_csv(path)};
    });
}

int frob_sequence_kind(const frob_sequence* s) {
    if (!s) return -1;
    switch (s->s.kind()) {
        case seq_kind::constant: return FROB_SEQ_CONSTANT;
        case seq_kind::extremal_plus: return FROB_SEQ_EXTREMAL_PLUS;
        case seq_kind::extremal_minus: return FROB_SEQ_EXTREMAL_MINUS;
        case seq_kind::extremal_both: return FROB_SEQ_EXTREMAL_BOTH;
        case seq_kind::custom: return -1;
    }
    return -1;
}

void frob_sequence_free(frob_sequence* s) { delete s; }

frob_status frob_expfam_make(const char* h, unsigned m, unsigned n, int64_t b, frob_expfam** out) {
    return guard([&] {
        need(h);
        need(out);
        *out = new frob_expfam{exponential_family(parse_poly(h), m, n, b)};
    });
}

void frob_expfam_free(frob_expfam* e) { delete e; }

frob_status frob_avg_single(const frob_argset* s, const frob_family* f, const frob_sequence* a, const uint64_t* xs,
                            size_t nx, frob_count_opts opts, frob_count_row* rows) {
    return guard([&] {
        need(s);
        need(f);
        need(a);
        need(xs);
        need(rows);
        fill_rows(avg_single(s->s, f->f, a->s, std::vector<u64>(xs, xs + nx), opts_of(opts)), rows);
    });
}

frob_status frob_avg_pair(const frob_argset* s, const frob_family* f1, const frob_family* f2, const frob_sequence* a1,
                          const frob_sequence* a2, const uint64_t* xs, size_t nx, frob_count_opts opts, int diagonal,
                          frob_count_row* rows) {
    return guard([&] {
        need(s);
        need(f1);
        need(f2);
        need(a1);
        need(a2);
        need(xs);
        need(rows);
        fill_rows(avg_pair(s->s, f1->f, f2->f, a1->s, a2->s, std::vector<u64>(xs, xs + nx), opts_of(opts), diagonal != 0),
                  rows);
    });
}

frob_status frob_exp_count(const frob_argset* s, const frob_expfam* e, const frob_sequence* a, const uint64_t* xs,
                           size_t nx, frob_count_opts opts, frob_count_row* rows) {
    return guard([&] {
        need(s);
        need(e);
        need(a);
        need(xs);
        need(rows);
        fill_rows(exp_count(s->s, e->e, a->s, std::vector<u64>(xs, xs + nx), opts_of(opts)), rows);
    });
}

frob_status frob_isolam_defect(const frob_expfam* e, int64_t tau, uint64_t p, frob_isolam* out) {
    return guard([&] {
        need(e);
        need(out);
        auto r = isolam_defect(e->e, tau, p);
        out->count = r.count;
        out->main12 = (r.main_term * 12).convert_to<u64>();
        out->defect = r.defect.convert_to<double>();
        out->defect_over_p = r.defect_over_p;
    });
}

frob_status frob_is_permutation_poly(const char* q, uint64_t p, int* out) {
    return guard([&] {
        need(q);
        need(out);
        *out = is_permutation_poly(parse_poly(q), p);
    });
}

frob_status frob_is_near_permutation(const char* q, const char* r, uint64_t p, int* out) {
    return guard([&] {
        need(q);
        need(r);
        need(out);
        *out = is_near_permutation_rational(parse_poly(q), parse_poly(r), p);
    });
}

frob_status frob_char_sum_direct(uint64_t f, uint64_t g, uint64_t m, uint64_t n, int64_t tau, int64_t ups, uint64_t om,
                                 int64_t* out) {
    return guard([&] {
        need(out);
        *out = char_sum_direct(f, g, m, n, tau, ups, om);
    });
}

frob_status frob_char_sum_local(uint64_t p, unsigned i, unsigned j, unsigned k, unsigned l, int64_t tau, int64_t ups,
                                uint64_t om, int64_t* out) {
    return guard([&] {
        need(out);
        *out = char_sum_local(p, i, j, k, l, tau, ups, om);
    });
}

frob_status frob_local_factor_eval(frob_curve_kind kind, uint64_t p, int64_t tau, int64_t ups, uint64_t om,
                                   frob_local_factor* out) {
    return guard([&] {
        need(out);
        auto r = local_factor(kind_of(kind), p, tau, ups, om);
        *out = frob_local_factor{};
        copy_text(rat_str(r.lambda), out->lambda, sizeof out->lambda);
        out->value = r.lambda.convert_to<double>();
        copy_text(r.branch, out->branch, sizeof out->branch);
        out->rho0 = r.rho0;
        out->rho_star = r.rho_star;
        out->v_omega = r.v_omega;
        out->v_rho0 = r.v_rho0;
        out->v_2tau = r.v_2tau;
    });
}

frob_status frob_local_factor_series(frob_curve_kind kind, uint64_t p, int64_t tau, int64_t ups, uint64_t om,
                                     unsigned max_exp, char* buf, size_t cap) {
    return guard([&] {
        need(buf);
        copy_text(rat_str(local_factor_from_series(kind_of(kind), p, tau, ups, om, max_exp)), buf, cap);
    });
}

frob_status frob_euler_product(frob_curve_kind kind, int64_t tau, int64_t ups, uint64_t om, uint64_t p_max,
                               frob_euler* out) {
    return guard([&] {
        need(out);
        auto r = euler_product(kind_of(kind), tau, ups, om, p_max);
        *out = frob_euler{};
        out->p_max = r.p_max;
        copy_text(real_str(r.partial_product), out->partial_product, sizeof out->partial_product);
        copy_text(real_str(r.constant), out->constant, sizeof out->constant);
        out->constant_value = r.constant.convert_to<double>();
        out->tail_estimate = r.tail_estimate;
        out->fitted_constant = r.fitted_constant;
        out->constant_tail = r.constant_tail;
    });
}

frob_status frob_pi_half(double x, double* out) {
    return guard([&] {
        need(out);
        *out = pi_half(x);
    });
}

frob_status frob_hurwitz_avg_eval(const frob_sequence* a, uint64_t x, uint64_t ups, uint64_t om, int moment,
                                  const frob_htable* table, frob_hurwitz_avg* out) {
    return guard([&] {
        need(a);
        need(out);
        congruence_class cc{ups, om};
        auto r = hurwitz_avg(a->s, x, cc, moment, table ? &table->t : nullptr);
        *out = {r.value, r.start_prime, r.primes_used, r.table_bound};
    });
}

frob_status frob_k_direct(int64_t tau, int64_t ups, uint64_t om, uint64_t F, uint64_t G, uint64_t M, uint64_t N,
                          double* value, double* tail) {
    return guard([&] {
        need(value);
        need(tail);
        auto r = K_direct(tau, ups, om, F, G, M, N);
        *value = r.value;
        *tail = r.tail;
    });
}

frob_status frob_clt_moments(frob_coeff_map phi, frob_coeff_map psi, int64_t A, int64_t B, frob_prime_set P,
                             uint64_t x, unsigned r_max, int collapsed, double budget, double* V,
                             frob_moment_info* info) {
    return guard([&] {
        need(V);
        pair_family_spec spec;
        spec.phi = map_of(phi);
        spec.psi = map_of(psi);
        spec.A = A;
        spec.B = B;
        spec.P = primes_of(P);
        auto r = collapsed ? moments_collapsed(spec, x, r_max) : moments(spec, x, r_max, budget);
        std::copy(r.V.begin(), r.V.end(), V);
        fill_info(r, info);
    });
}

frob_status frob_eigen_load(const char* path, frob_eigen** out) {
    return guard([&] {
        need(path);
        need(out);
        *out = new frob_eigen{eigenvalue_table::from_csv(path)};
    });
}

size_t frob_eigen_forms(const frob_eigen* t) { return t ? t->t.forms.size() : 0; }
void frob_eigen_free(frob_eigen* t) { delete t; }

frob_status frob_eigen_moments(const frob_eigen* t, const uint64_t* primes, size_t nprimes, uint64_t x, unsigned r_max,
                               double* V, frob_moment_info* info) {
    return guard([&] {
        need(t);
        need(V);
        if (nprimes) need(primes);
        std::vector<u64> ps = nprimes ? std::vector<u64>(primes, primes + nprimes) : primes_up_to(x);
        auto r = moments_from_eigen_table(t->t, ps, x, r_max);
        std::copy(r.V.begin(), r.V.end(), V);
        fill_info(r, info);
    });
}

frob_status frob_h_coeff(unsigned m, unsigned j, int64_t* out) {
    return guard([&] {
        need(out);
        *out = h_coeff(m, j);
    });
}

frob_status frob_s_avg(uint64_t n, double* out) {
    return guard([&] {
        need(out);
        *out = S_avg(n);
    });
}

uint64_t frob_gaussian_moment(unsigned r) { return gaussian_moment(r); }

frob_status frob_selftest(const char* command, uint64_t* checks, uint64_t* failures, char* first_failure, size_t cap) {
    return guard([&] {
        need(command);
        need(checks);
        need(failures);
        auto r = selftest(selftest_module_for(command));
        *checks = r.checks;
        *failures = r.failures.size();
        copy_text(r.failures.empty() ? std::string() : r.failures.front(), first_failure, cap);
    });
}

}  // extern "C"
