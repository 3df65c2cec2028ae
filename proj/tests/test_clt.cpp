#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "frobstat/clt.hpp"
#include "frobstat/ffcurve.hpp"
#include "frobstat/parallel.hpp"
#include "oracle.hpp"

using namespace frobstat;

TEST_CASE("h coefficients") {
    CHECK(h_coeff(2, 0) == 1);
    CHECK(h_coeff(2, 1) == 0);
    CHECK(h_coeff(2, 2) == 1);
    CHECK(h_coeff(3, 3) == 1);
    CHECK(h_coeff(4, 0) == 2);
    CHECK(h_coeff(5, 2) == 0);
    CHECK_THROWS_AS(h_coeff(3, 4), error);
    for (unsigned m = 0; m <= 12; ++m)
        for (unsigned j = 0; j <= m; ++j) CHECK(std::fabs((double)h_coeff(m, j) - h_coeff_quadrature(m, j)) < 1e-8);
}

TEST_CASE("power identity for normalized traces") {
    std::mt19937_64 rng(3);
    int done = 0;
    while (done < 20) {
        u64 p = oracle::primes(5, 100)[rng() % 23];
        u64 a = rng() % p, b = rng() % p;
        if (oracle::singular(a, b, p)) continue;
        ++done;
        i64 ap = oracle::trace(a, b, p);
        auto t = hecke_normalized(ap, p, 6);
        double x = (double)ap / std::sqrt((double)p);
        for (unsigned m = 0; m <= 6; ++m) {
            double s = 0;
            for (unsigned j = 0; j <= m; ++j) s += (double)h_coeff(m, j) * t[j];
            CHECK(std::fabs(std::pow(x, m) - s) < 1e-10);
        }
    }
}

TEST_CASE("normalized Hecke recursion matches the unnormalized one") {
    // a(p^j) = a(p) a(p^{j-1}) - p a(p^{j-2}), normalized by p^{j/2}
    u64 p = 13;
    i64 ap = curve_trace(2, 3, p);
    auto t = hecke_normalized(ap, p, 5);
    std::vector<double> raw{1, (double)ap};
    for (int j = 2; j <= 5; ++j) raw.push_back(ap * raw[j - 1] - (double)p * raw[j - 2]);
    for (int j = 0; j <= 5; ++j) CHECK(std::fabs(t[j] - raw[j] / std::pow((double)p, j / 2.0)) < 1e-12);
}

TEST_CASE("S(n) values and multiplicativity") {
    CHECK(S_avg(1) == 1.0);
    for (u64 q : {5, 7, 11, 125, 343}) CHECK(std::fabs(S_avg(q)) < 1e-15);
    CHECK(S_avg(2) == 0.0);
    for (u64 p : oracle::primes(5, 50)) CHECK(std::fabs(S_avg(p * p)) <= 2.0 * 2.0 / std::sqrt((double)p));
    // direct definition at p^2: average of (a_p^2 - p)/p over nonsingular (a, b) mod p
    for (u64 p : {5, 7, 11}) {
        double s = 0;
        for (u64 a = 0; a < p; ++a)
            for (u64 b = 0; b < p; ++b) {
                if (oracle::singular(a, b, p)) continue;
                double t = (double)oracle::trace(a, b, p);
                s += (t * t - (double)p) / (double)p;
            }
        CHECK(std::fabs(S_avg(p * p) - s / (double)(p * p)) < 1e-12);
    }
    CHECK(std::fabs(S_avg(25 * 49) - S_avg(25) * S_avg(49)) < 1e-15);
    CHECK(std::fabs(S_avg(9 * 121) - S_avg(9) * S_avg(121)) < 1e-15);
    CHECK_THROWS_AS(S_avg(0), error);
    CHECK_THROWS_AS(S_avg(1009 * 1013), error);
}

TEST_CASE("gaussian moments against quadrature") {
    for (unsigned r = 0; r <= 10; ++r) {
        auto f = [&](double t) { return std::pow(t, (double)r) * std::exp(-t * t / 2) / std::sqrt(2 * std::numbers::pi); };
        double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -40.0, 40.0, 15, 1e-13);
        CHECK(std::fabs(q - (double)gaussian_moment(r)) < 1e-9);
    }
    CHECK(gaussian_moment(2) == 1);
    CHECK(gaussian_moment(4) == 3);
    CHECK(gaussian_moment(3) == 0);
}

TEST_CASE("isomorphism over Q") {
    CHECK(isomorphic_over_q(1, 1, 16, 64));    // u = 2
    CHECK(!isomorphic_over_q(1, 1, 4, 8));     // quadratic twist by 2
    CHECK(isomorphic_over_q(0, 3, 0, 3 * 729));
    CHECK(!isomorphic_over_q(0, 3, 0, -3));    // -1 is not a sixth power
    CHECK(isomorphic_over_q(2, 0, 32, 0));
    CHECK(!isomorphic_over_q(2, 0, -2, 0));
    CHECK(isomorphic_over_q(81, 729 * 2, 1, 2));
    CHECK(twist_class_key(16, 64) == std::pair<i64, i64>{1, 1});
    CHECK(twist_class_key(0, 128) == std::pair<i64, i64>{0, 2});
    CHECK(twist_class_key(-32, 0) == std::pair<i64, i64>{-2, 0});
}

namespace {

// V_r by the definition: every ordered pair of distinct non-singular curves in
// the box; in a box with |a|, |b| <= 2 distinct curves are never isomorphic
std::vector<double> moments_oracle(i64 A, i64 B, u64 x, unsigned rmax) {
    std::vector<std::pair<i64, i64>> curves;
    for (i64 a = -A; a <= A; ++a)
        for (i64 b = -B; b <= B; ++b)
            if (4 * a * a * a + 27 * b * b != 0) curves.push_back({a, b});
    auto ps = oracle::primes(5, x);
    std::vector<std::vector<double>> v(curves.size(), std::vector<double>(ps.size(), 0.0));
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (std::size_t k = 0; k < ps.size(); ++k) {
            u64 p = ps[k], a = oracle::md(curves[i].first, p), b = oracle::md(curves[i].second, p);
            if (!oracle::singular(a, b, p)) v[i][k] = (double)oracle::trace(a, b, p) / std::sqrt((double)p);
        }
    std::vector<long double> s(rmax, 0);
    u64 pairs = 0;
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (std::size_t j = 0; j < curves.size(); ++j) {
            if (i == j) continue;
            ++pairs;
            long double d = 0;
            for (std::size_t k = 0; k < ps.size(); ++k) d += v[i][k] * v[j][k];
            d /= std::sqrt((long double)ps.size());
            for (unsigned r = 1; r <= rmax; ++r) s[r - 1] += std::pow(d, (long double)r);
        }
    std::vector<double> out;
    for (auto x : s) out.push_back((double)(x / pairs));
    return out;
}

}  // namespace

TEST_CASE("moments on a tiny box equal the direct definition") {
    pair_family_spec spec;
    spec.A = 2;
    spec.B = 2;
    auto rep = moments(spec, 20, 4);
    auto ref = moments_oracle(2, 2, 20, 4);
    for (int r = 0; r < 4; ++r) CHECK(std::fabs(rep.V[r] - ref[r]) < 1e-12 * std::max(1.0, std::fabs(ref[r])));
    CHECK(rep.curves == 24);
    CHECK(rep.pair_count == 24 * 23);
    auto col = moments_collapsed(spec, 20, 2);
    for (int r = 0; r < 2; ++r) CHECK(std::fabs(col.V[r] - rep.V[r]) < 1e-12 * std::max(1.0, std::fabs(rep.V[r])));
}

TEST_CASE("pair loop and collapsed sums agree with isomorphic classes present") {
    pair_family_spec spec;
    spec.A = 17;
    spec.B = 65;
    spec.P.k = prime_set::kind::congruence;
    spec.P.ups = 1;
    spec.P.om = 3;
    auto rep = moments(spec, 150, 2);
    auto col = moments_collapsed(spec, 150, 2);
    CHECK(rep.excluded_isomorphic > 0);  // e.g. (1,1) and (16,64)
    for (int r = 0; r < 2; ++r) CHECK(std::fabs(col.V[r] - rep.V[r]) < 1e-10 * std::max(1.0, std::fabs(rep.V[r])));
}

TEST_CASE("moments do not depend on the thread count") {
    pair_family_spec spec;
    spec.A = 6;
    spec.B = 6;
    set_thread_count(1);
    auto a = moments(spec, 200, 3);
    set_thread_count(8);
    auto b = moments(spec, 200, 3);
    set_thread_count(0);
    CHECK(a.V == b.V);
}

TEST_CASE("coefficient maps") {
    coeff_map m;
    m.k = coeff_map::kind::polynomial;
    m.q = parse_poly("Z^5+5Z^3+5Z");
    CHECK(m.apply(2) == 32 + 40 + 10);
    CHECK(m.apply(-1) == -11);
    coeff_map e;
    e.k = coeff_map::kind::exponential;
    e.alpha = 2;
    e.beta = 1;
    e.gamma = 3;
    CHECK(e.apply(2) == 45);
    CHECK_THROWS_AS(e.apply(-1), error);
    e.gamma = -1;
    CHECK(e.apply(-3) == 5);
    pair_family_spec spec;
    spec.phi.k = coeff_map::kind::exponential;
    spec.phi.alpha = 0;
    CHECK_THROWS_AS(moments(spec, 50, 1), error);
    pair_family_spec big;
    big.A = 40;
    big.B = 40;
    CHECK_THROWS_AS(moments(big, 1000, 3, 1e6), error);
}

TEST_CASE("eigenvalue tables") {
    auto dir = std::filesystem::temp_directory_path();
    auto path = (dir / "frobstat_eigen.csv").string();
    {
        std::ofstream o(path);
        o << "form_label,p,lambda_normalized\n11.2.a.a,5,0.4472135955\n37.2.a.a,5,-0.8944271910\n";
    }
    auto t = eigenvalue_table::from_csv(path);
    CHECK(t.forms.size() == 2);
    auto rep = moments_from_eigen_table(t, {5}, 10, 2);
    double x = 0.4472135955 * -0.8944271910;
    CHECK(std::fabs(rep.V[0] - x) < 1e-15);
    CHECK(std::fabs(rep.V[1] - x * x) < 1e-15);
    CHECK_THROWS_AS(moments_from_eigen_table(t, {5, 7}, 10, 2), error);
    {
        std::ofstream o(path);
        o << "f,5,0.3\n";
    }
    CHECK_THROWS_AS(moments_from_eigen_table(eigenvalue_table::from_csv(path), {5}, 10, 2), error);
    {
        std::ofstream o(path);
        o << "f,5,0.3\ng,5,2.5\n";
    }
    try {
        eigenvalue_table::from_csv(path);
        FAIL("expected a Deligne-bound error");
    } catch (const error& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
    // synthetic Sato-Tate-like data: V_2 near 1
    {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> th(0, std::numbers::pi);
        std::ofstream o(path);
        for (int f = 0; f < 60; ++f)
            for (u64 p : oracle::primes(2, 400)) {
                double lam;
                // rejection sampling from (2/pi) sin^2
                for (;;) {
                    double a = th(rng), u = std::uniform_real_distribution<double>(0, 1)(rng);
                    if (u <= std::sin(a) * std::sin(a)) {
                        lam = 2 * std::cos(a);
                        break;
                    }
                }
                o << "f" << f << "," << p << "," << lam << "\n";
            }
    }
    auto syn = moments_from_eigen_table(eigenvalue_table::from_csv(path), oracle::primes(2, 400), 400, 2);
    CHECK(std::fabs(syn.V[1] - 1) < 0.2);
    std::filesystem::remove(path);
}
