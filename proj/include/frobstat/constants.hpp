#pragma once

#include <string>

#include "frobstat/arith.hpp"
#include "frobstat/counting.hpp"

namespace frobstat {

class hurwitz_table;

// c_{f,g}^{tau,ups,om}(m, n) from its definition
i64 char_sum_direct(u64 f, u64 g, u64 m, u64 n, i64 tau, i64 ups, u64 om);
// closed form of c_{p^k,p^l}(p^i, p^j)
i64 char_sum_local(u64 p, unsigned i, unsigned j, unsigned k, unsigned l, i64 tau, i64 ups, u64 om);

enum class curve_kind { one, two };

struct local_factor_profile {
    curve_kind kind = curve_kind::one;
    u64 p = 0;
    rational lambda;
    std::string branch;
    i64 rho0 = 0;
    i64 rho_star = 0;
    unsigned v_omega = 0, v_rho0 = 0, v_2tau = 0;
    rational sigma;  // sigma_{-1} value used by the branch, 0 when unused
};

local_factor_profile local_factor(curve_kind kind, u64 p, i64 tau, i64 ups, u64 om);
rational local_factor_from_series(curve_kind kind, u64 p, i64 tau, i64 ups, u64 om, unsigned max_exp);

struct euler_product_result {
    u64 p_max = 0;
    real partial_product;  // includes exact factors for primes above p_max dividing 2 tau om
    double tail_estimate = 0;  // bound on sum_{p > p_max} |log Lambda(p)|
    double fitted_constant = 0;
    real constant;          // prefactor times partial product
    double constant_tail = 0;  // |constant| (e^tail - 1)
};

euler_product_result euler_product(curve_kind kind, i64 tau, i64 ups, u64 om, u64 p_max);

double pi_half(double x);

struct hurwitz_avg_result {
    double value = 0;
    u64 start_prime = 5;
    u64 primes_used = 0;
    u64 table_bound = 0;
};

// seq must be constant or an extremal kind; table may be null (built on demand)
hurwitz_avg_result hurwitz_avg(const trace_sequence& seq, u64 x, const congruence_class& cc, int moment,
                               const hurwitz_table* table = nullptr);

struct k_direct_result {
    double value = 0;
    double tail = 0;  // bound on the omitted part of the absolutely convergent series
    double abs_total = 0;
};

k_direct_result K_direct(i64 tau, i64 ups, u64 om, u64 F, u64 G, u64 M, u64 N);

}  // namespace frobstat
