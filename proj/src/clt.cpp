#include "frobstat/clt.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "frobstat/ffcurve.hpp"
#include "frobstat/parallel.hpp"

namespace frobstat {

namespace {

u128 binom(unsigned n, int k) {
    if (k < 0 || k > (int)n) return 0;
    u128 r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

i64 h_coeff(unsigned m, unsigned j) {
    if (j > m) throw error(errc::range, "h_coeff needs j <= m");
    if (m > 60) throw error(errc::range, "h_coeff supports m <= 60");
    if ((m - j) % 2) return 0;
    int k = (int)(m - j) / 2;
    return (i64)(binom(m, k) - binom(m, k - 1));
}

double h_coeff_quadrature(unsigned m, unsigned j) {
    auto f = [&](double t) { return std::pow(std::cos(t), (double)m) * std::sin((j + 1) * t) * std::sin(t); };
    double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi, 15, 1e-14);
    return std::ldexp(v, (int)m + 1) / std::numbers::pi;
}

std::vector<double> hecke_normalized(i64 ap, u64 p, unsigned jmax) {
    std::vector<double> t(jmax + 1);
    t[0] = 1;
    if (jmax >= 1) t[1] = (double)ap / std::sqrt((double)p);
    for (unsigned j = 2; j <= jmax; ++j) t[j] = t[1] * t[j - 1] - t[j - 2];
    return t;
}

double S_avg(u64 n, u64 cap) {
    if (n == 0) throw error(errc::domain, "S_avg needs n >= 1");
    u64 s = sqfree_core(n);
    if ((u128)s * s > cap) throw error(errc::cap, "s(n)^2 exceeds the configured cap");
    double out = 1;
    for (auto [p, e] : factorize(n)) {
        // 2 always divides -16(4a^3+27b^2), so no residue pair survives at p = 2
        if (p == 2) return 0.0;
        trace_context ctx(p);
        compensated_sum<double> acc;
        for (u64 a = 0; a < p; ++a)
            for (u64 b = 0; b < p; ++b) {
                if (is_singular(a, b, p)) continue;
                acc.add(hecke_normalized(ctx.trace(a, b), p, e)[e]);
            }
        out *= acc.value() / ((double)p * (double)p);
    }
    return out;
}

u64 gaussian_moment(unsigned r) {
    if (r % 2) return 0;
    u64 v = 1;
    for (unsigned k = r - 1; k >= 1 && k < r; k -= 2) v *= k;
    return v;
}

i64 coeff_map::apply(i64 n) const {
    switch (k) {
        case kind::identity: return n;
        case kind::polynomial: {
            bigint v = q.eval(bigint(n));
            if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
                throw error(errc::range, "coefficient map value overflows 64 bits");
            return v.convert_to<i64>();
        }
        case kind::exponential: {
            if (n < 0 && gamma != 1 && gamma != -1)
                throw error(errc::domain, "exponential map needs n >= 0 unless |gamma| = 1");
            bigint v = bigint(alpha) * n + beta;
            bigint g = 1;
            for (i64 i = 0; i < (n < 0 ? -n : n); ++i) g *= gamma;
            v *= g;
            if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
                throw error(errc::range, "coefficient map value overflows 64 bits");
            return v.convert_to<i64>();
        }
    }
    return n;
}

std::string coeff_map::str() const {
    switch (k) {
        case kind::identity: return "identity";
        case kind::polynomial: return "poly:" + q.str();
        case kind::exponential:
            return "exp:(" + std::to_string(alpha) + "n+" + std::to_string(beta) + ")*" + std::to_string(gamma) + "^n";
    }
    return "";
}

std::vector<u64> prime_set::up_to(u64 x) const {
    std::vector<u64> out;
    if (k == kind::list) {
        for (u64 p : primes)
            if (p <= x) out.push_back(p);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    for (u64 p : primes_up_to(x)) {
        if (p < 5) continue;
        if (k == kind::congruence && p % om != ups % om) continue;
        out.push_back(p);
    }
    return out;
}

namespace {

bigint iroot(const bigint& n, unsigned k) {
    if (n < 2) return n;
    // Newton iteration from above
    unsigned bits = (unsigned)msb(n) + 1;
    bigint x = bigint(1) << ((bits + k - 1) / k);
    for (;;) {
        bigint y = ((k - 1) * x + n / boost::multiprecision::pow(x, k - 1)) / k;
        if (y >= x) return x;
        x = y;
    }
}

bool is_kth_power(const rational& q, unsigned k) {
    if (q <= 0) {
        if (k % 2 == 0 || q == 0) return false;
        return is_kth_power(-q, k);
    }
    bigint a = numerator(q), b = denominator(q);
    bigint ra = iroot(a, k), rb = iroot(b, k);
    return boost::multiprecision::pow(ra, k) == a && boost::multiprecision::pow(rb, k) == b;
}

bool iso_rational(const rational& a, const rational& b, const rational& a2, const rational& b2) {
    if ((a == 0) != (a2 == 0) || (b == 0) != (b2 == 0)) return false;
    if (a == 0) return is_kth_power(b2 / b, 6);
    if (b == 0) return is_kth_power(a2 / a, 4);
    // same j forces (a2/a)^3 = (b2/b)^2; then u^2 = (b2 a)/(b a2)
    if ((a2 / a) * (a2 / a) * (a2 / a) != (b2 / b) * (b2 / b)) return false;
    return is_kth_power((b2 * a) / (b * a2), 2);
}

struct curve_rec {
    i64 a, b;
    std::size_t cls = 0;
};

struct family_data {
    std::vector<curve_rec> curves;
    std::vector<std::vector<std::size_t>> classes;
    u64 singular = 0;
    std::vector<u64> primes;
    std::vector<std::vector<double>> vec;  // per curve, per prime
    u64 pair_count = 0;
};

family_data build_family(const pair_family_spec& spec, u64 x) {
    if (spec.A < 0 || spec.B < 0) throw error(errc::domain, "box bounds must be nonnegative");
    if (spec.phi.k == coeff_map::kind::exponential && (spec.phi.alpha == 0 || spec.phi.gamma == 0))
        throw error(errc::domain, "exponential map needs nonzero multiplier and base");
    if (spec.psi.k == coeff_map::kind::exponential && (spec.psi.alpha == 0 || spec.psi.gamma == 0))
        throw error(errc::domain, "exponential map needs nonzero multiplier and base");
    family_data fd;
    fd.primes = spec.P.up_to(x);
    for (u64 p : fd.primes)
        if (p < 5 || !is_prime(p)) throw error(errc::domain, "curve prime sets need primes >= 5");
    if (fd.primes.empty()) throw error(errc::domain, "prime set has no primes up to x");
    std::vector<std::pair<i64, i64>> coeffs;
    for (i64 a = -spec.A; a <= spec.A; ++a)
        for (i64 b = -spec.B; b <= spec.B; ++b) coeffs.push_back({spec.phi.apply(a), spec.psi.apply(b)});
    std::sort(coeffs.begin(), coeffs.end());
    coeffs.erase(std::unique(coeffs.begin(), coeffs.end()), coeffs.end());
    // group by j, then split groups into isomorphism classes
    std::map<rational, std::vector<std::size_t>> by_j;
    for (auto [a, b] : coeffs) {
        bigint dd = 4 * bigint(a) * a * a + 27 * bigint(b) * b;
        if (dd == 0) {
            ++fd.singular;
            continue;
        }
        rational j = rational(bigint(6912 * bigint(a) * a * a)) / rational(dd);
        by_j[j].push_back(fd.curves.size());
        fd.curves.push_back({a, b, 0});
    }
    for (auto& [j, idx] : by_j) {
        std::vector<std::size_t> reps;
        for (std::size_t i : idx) {
            auto& c = fd.curves[i];
            bool placed = false;
            for (std::size_t r : reps) {
                const auto& rc = fd.curves[fd.classes[fd.curves[r].cls][0]];
                if (iso_rational(rational(rc.a), rational(rc.b), rational(c.a), rational(c.b))) {
                    c.cls = fd.curves[r].cls;
                    fd.classes[c.cls].push_back(i);
                    placed = true;
                    break;
                }
            }
            if (!placed) {
                c.cls = fd.classes.size();
                fd.classes.push_back({i});
                reps.push_back(i);
            }
        }
    }
    u64 n = fd.curves.size();
    u64 diag = 0;
    for (const auto& cl : fd.classes) diag += (u64)cl.size() * cl.size();
    fd.pair_count = n * n - diag;
    if (fd.pair_count == 0) throw error(errc::domain, "family has no non-isomorphic pairs");

    // per-curve normalized trace vectors, frozen before the pair loop
    fd.vec.assign(n, std::vector<double>(fd.primes.size(), 0.0));
    parallel_for(fd.primes.size(), [&](std::size_t k) {
        u64 p = fd.primes[k];
        trace_context ctx(p);
        double sp = std::sqrt((double)p);
        for (u64 i = 0; i < n; ++i) {
            u64 a = mod_signed(fd.curves[i].a, p), b = mod_signed(fd.curves[i].b, p);
            if (is_singular(a, b, p)) continue;  // bad reduction contributes 0
            fd.vec[i][k] = (double)ctx.trace(a, b) / sp;
        }
    });
    return fd;
}

moment_report finish(const family_data& fd, u64 x, unsigned r_max, std::vector<compensated_sum<double>>& rows_total) {
    moment_report rep;
    rep.x = x;
    rep.curves = fd.curves.size();
    rep.singular = fd.singular;
    rep.pair_count = fd.pair_count;
    u64 diag = 0;
    for (const auto& cl : fd.classes) diag += (u64)cl.size() * cl.size();
    rep.excluded_isomorphic = diag;
    rep.primes = fd.primes.size();
    for (unsigned r = 1; r <= r_max; ++r) {
        rep.V.push_back(rows_total[r - 1].value() / (double)fd.pair_count);
        rep.gaussian_target.push_back(gaussian_moment(r));
    }
    return rep;
}

}  // namespace

moment_report moments(const pair_family_spec& spec, u64 x, unsigned r_max, double budget) {
    if (r_max < 1 || r_max > 16) throw error(errc::domain, "rMax must be in 1..16");
    family_data fd = build_family(spec, x);
    u64 n = fd.curves.size();
    if ((double)n * (double)n * (double)fd.primes.size() > budget)
        throw error(errc::budget, "pair loop exceeds the configured budget");
    double norm = 1.0 / std::sqrt((double)fd.primes.size());
    std::size_t np = fd.primes.size();
    std::vector<std::vector<double>> rows(n, std::vector<double>(r_max, 0.0));
    parallel_for(n, [&](std::size_t i) {
        std::vector<compensated_sum<double>> acc(r_max);
        const auto& vi = fd.vec[i];
        std::size_t ci = fd.curves[i].cls;
        for (std::size_t j = 0; j < n; ++j) {
            if (fd.curves[j].cls == ci) continue;
            const auto& vj = fd.vec[j];
            double dot = 0;
            for (std::size_t k = 0; k < np; ++k) dot += vi[k] * vj[k];
            double X = dot * norm, pw = 1;
            for (unsigned r = 0; r < r_max; ++r) {
                pw *= X;
                acc[r].add(pw);
            }
        }
        for (unsigned r = 0; r < r_max; ++r) rows[i][r] = acc[r].value();
    });
    std::vector<compensated_sum<double>> total(r_max);
    for (std::size_t i = 0; i < n; ++i)
        for (unsigned r = 0; r < r_max; ++r) total[r].add(rows[i][r]);
    return finish(fd, x, r_max, total);
}

moment_report moments_collapsed(const pair_family_spec& spec, u64 x, unsigned r_max) {
    if (r_max < 1 || r_max > 2) throw error(errc::domain, "the collapsed path supports rMax <= 2");
    family_data fd = build_family(spec, x);
    std::size_t n = fd.curves.size(), np = fd.primes.size();
    double pi = (double)np;
    std::vector<compensated_sum<double>> total(r_max);
    // first moment: |sum v|^2 minus each class's |sum v|^2
    std::vector<compensated_sum<double>> sv(np);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < np; ++k) sv[k].add(fd.vec[i][k]);
    compensated_sum<double> s1;
    for (std::size_t k = 0; k < np; ++k) s1.add(sv[k].value() * sv[k].value());
    for (const auto& cl : fd.classes) {
        for (std::size_t k = 0; k < np; ++k) {
            double c = 0;
            for (std::size_t i : cl) c += fd.vec[i][k];
            s1.add(-c * c);
        }
    }
    total[0].add(s1.value() / std::sqrt(pi));
    if (r_max >= 2) {
        // second moment: ||sum v v^T||_F^2 minus within-class (v_i . v_j)^2
        std::vector<double> M(np * np, 0.0);
        parallel_for(np, [&](std::size_t k) {
            for (std::size_t l = 0; l < np; ++l) {
                compensated_sum<double> c;
                for (std::size_t i = 0; i < n; ++i) c.add(fd.vec[i][k] * fd.vec[i][l]);
                M[k * np + l] = c.value();
            }
        });
        compensated_sum<double> s2;
        for (double m : M) s2.add(m * m);
        for (const auto& cl : fd.classes)
            for (std::size_t i : cl)
                for (std::size_t j : cl) {
                    double dot = 0;
                    for (std::size_t k = 0; k < np; ++k) dot += fd.vec[i][k] * fd.vec[j][k];
                    s2.add(-dot * dot);
                }
        total[1].add(s2.value() / pi);
    }
    return finish(fd, x, r_max, total);
}

eigenvalue_table eigenvalue_table::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io, "cannot open eigenvalue table " + path);
    eigenvalue_table t;
    std::string line;
    u64 lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        std::string where = path + ":" + std::to_string(lineno);
        if (f.size() != 3) throw error(errc::parse, where + ": expected form_label,p,lambda_normalized");
        u64 p;
        double lam;
        try {
            std::size_t pos;
            p = std::stoull(f[1], &pos);
            if (pos != f[1].size()) throw std::invalid_argument(f[1]);
            lam = std::stod(f[2], &pos);
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // header row
            throw error(errc::parse, where + ": unreadable prime or eigenvalue");
        }
        if (!is_prime(p)) throw error(errc::parse, where + ": " + f[1] + " is not prime");
        if (!(std::fabs(lam) <= 2.0 + 1e-9)) throw error(errc::parse, where + ": eigenvalue violates the Deligne bound |lambda| <= 2");
        if (std::find(t.forms.begin(), t.forms.end(), f[0]) == t.forms.end()) t.forms.push_back(f[0]);
        t.lambda[{f[0], p}] = lam;
    }
    return t;
}

moment_report moments_from_eigen_table(const eigenvalue_table& table, const std::vector<u64>& P, u64 x,
                                       unsigned r_max) {
    if (r_max < 1 || r_max > 16) throw error(errc::domain, "rMax must be in 1..16");
    if (table.forms.size() < 2) throw error(errc::domain, "eigenvalue table needs at least two forms");
    std::vector<u64> ps;
    for (u64 p : P)
        if (p <= x) ps.push_back(p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    if (ps.empty()) throw error(errc::domain, "no primes up to x");
    std::size_t n = table.forms.size(), np = ps.size();
    std::vector<std::vector<double>> vec(n, std::vector<double>(np));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < np; ++k) {
            auto it = table.lambda.find({table.forms[i], ps[k]});
            if (it == table.lambda.end())
                throw error(errc::missing, "missing eigenvalue for form " + table.forms[i] + " at p = " + std::to_string(ps[k]));
            vec[i][k] = it->second;
        }
    double norm = 1.0 / std::sqrt((double)np);
    std::vector<compensated_sum<double>> total(r_max);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double dot = 0;
            for (std::size_t k = 0; k < np; ++k) dot += vec[i][k] * vec[j][k];
            double X = dot * norm, pw = 1;
            for (unsigned r = 0; r < r_max; ++r) {
                pw *= X;
                total[r].add(pw);
            }
        }
    moment_report rep;
    rep.x = x;
    rep.curves = n;
    rep.pair_count = n * (n - 1);
    rep.primes = np;
    for (unsigned r = 1; r <= r_max; ++r) {
        rep.V.push_back(total[r - 1].value() / (double)rep.pair_count);
        rep.gaussian_target.push_back(gaussian_moment(r));
    }
    return rep;
}

std::pair<i64, i64> twist_class_key(i64 a, i64 b) {
    // divide out the largest d with d^4 | a and d^6 | b
    if (a == 0 && b == 0) return {0, 0};
    u64 ua = a < 0 ? -(u64)a : (u64)a, ub = b < 0 ? -(u64)b : (u64)b;
    u64 d = 1;
    for (auto [p, e] : factorize(gcd(ua, ub))) {
        unsigned k = std::min(ua ? valuation(ua, p) / 4 : e, ub ? valuation(ub, p) / 6 : e);
        if (!ua) k = e / 6;
        if (!ub) k = e / 4;
        for (unsigned i = 0; i < k; ++i) d *= p;
    }
    i128 d4 = (i128)d * d * d * d, d6 = d4 * d * d;
    return {(i64)(a / d4), (i64)(b / d6)};
}

bool isomorphic_over_q(i64 a, i64 b, i64 a2, i64 b2) {
    return iso_rational(rational(a), rational(b), rational(a2), rational(b2));
}

}  // namespace frobstat
