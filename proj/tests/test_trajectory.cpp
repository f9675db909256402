#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rnm/trajectory.hpp"
#include "util.hpp"

using namespace rnm;

namespace {

EnvelopeSpec zero_spec() {
    EnvelopeSpec e;
    e.kind = EnvelopeKind::Zero;
    return e;
}

}  // namespace

TEST_CASE("thm1 curve: closed form and the size ODE") {
    auto c = CurveParams::thm1(0.5, 0.6);
    CurvePoint p0 = ideal(c, 0.0);
    CHECK(p0.s == doctest::Approx(1.0));
    CHECK(p0.g == doctest::Approx(1.0));
    // s' = -2 gamma g with gamma = 1/(1+eps), checked by central differences
    for (double x : {0.1, 0.3, 0.55}) {
        double h = 1e-6;
        double ds = (ideal(c, x + h).s - ideal(c, x - h).s) / (2 * h);
        CHECK(ds == doctest::Approx(-2.0 / 1.5 * ideal(c, x).g).epsilon(1e-6));
        CHECK(ideal(c, x).s == doctest::Approx(std::pow(1 - x / 1.5, 2)));
    }
    CHECK(code_of([&] { ideal(c, 0.61); }) == ErrorCode::OutOfDomain);
    CHECK(code_of([&] { ideal(c, -0.01); }) == ErrorCode::OutOfDomain);
}

TEST_CASE("thmq curve: s = g^M and the default horizon stays in range") {
    for (double eps : {0.05, 0.1, 0.3}) {
        auto c = CurveParams::thmq(eps);
        CHECK(c.M > 2.0);
        CHECK(c.eta > 1.0 / (2 * (1 + eps)));
        for (double x = 0; x <= c.eta; x += c.eta / 7) {
            CurvePoint p = ideal(c, x);
            CHECK(std::abs(p.s - std::pow(p.g, c.M)) < 1e-12);
        }
    }
}

TEST_CASE("ideal values at t=0") {
    ScheduleInputs in{CurveParams::thm1(0.5, 0.6), 400, 0.05, 1};
    auto v = ideal_values(in, 0);
    CHECK(v.s == doctest::Approx(600));
    CHECK(v.d == doctest::Approx(400));
    ScheduleInputs iq{CurveParams::thmq(0.3), 500, 0.01, 1};
    auto w = ideal_values(iq, 0);
    CHECK(w.s == doctest::Approx(500));
    CHECK(w.d == doctest::Approx(1300));
    CHECK(w.d2 == doctest::Approx(1150));
}

TEST_CASE("identity checks on a small random grid") {
    auto grid = random_identity_grid(300, 3);
    CHECK(grid.size() == 300);
    for (auto& pt : grid) {
        CHECK(pt.eps > 0);
        CHECK(pt.eps < 0.5);
        CHECK(pt.delta < 0.05);
        CHECK(pt.q >= 1e3);
        CHECK(pt.q <= 1e6);
    }
    auto rep = check_identities(grid);
    CHECK(rep.ok);
    CHECK(rep.max_size_residual < 1e-9);
    CHECK(rep.max_degree_residual < 1e-9);
    CHECK(rep.max_power_residual < 1e-12);
}

TEST_CASE("envelopes") {
    ScheduleInputs in{CurveParams::thm1(0.5, 0.6), 400, 0.05, 1};
    auto zero = envelope_schedule(in, 12, zero_spec());
    REQUIRE(zero.alpha.size() == 13);
    for (double a : zero.alpha) CHECK(a == 0.0);
    EnvelopeSpec ex;
    ex.kind = EnvelopeKind::Explicit;
    ex.alpha = {0.01, 0.02};
    ex.beta = {0.03};
    auto e = envelope_schedule(in, 4, ex);
    CHECK(e.alpha[0] == 0.01);
    CHECK(e.alpha[4] == 0.02);
    CHECK(e.beta[3] == 0.03);
    auto paper = envelope_schedule(in, 3, EnvelopeSpec{});
    CHECK(paper.alpha[0] == 0.0);
    CHECK(paper.alpha[3] > paper.alpha[1]);
    for (auto k : {EnvelopeKind::Paper, EnvelopeKind::Zero, EnvelopeKind::Desk, EnvelopeKind::Explicit})
        CHECK(parse_envelope_kind(to_string(k)) == k);
}

TEST_CASE("saturating alpha closed form") {
    CHECK(saturating_alpha(0, 0.1, 0.5, 0.9) == 0.0);
    double f = 1 + 10 * 0.1 / std::pow(1 - 0.45, 2);
    CHECK(saturating_alpha(2, 0.1, 0.5, 0.9) == doctest::Approx(std::sqrt(0.1) * (f * f - 1)));
}

TEST_CASE("compare flags records below target") {
    std::vector<TrajectoryRecord> rs(2);
    rs[0].t = 0;
    rs[0].s_tilde = 100;
    rs[0].size_min = 100;
    rs[0].d_tilde = 50;
    rs[0].degree_max = 50;
    rs[1].t = 1;
    rs[1].s_tilde = 100;
    rs[1].size_min = 80;
    rs[1].alpha = 0.1;
    rs[1].d_tilde = 50;
    rs[1].degree_max = 40;
    auto d = compare(rs);
    REQUIRE(d.points.size() == 2);
    CHECK(d.points[1].size_dev == doctest::Approx(-0.2));
    CHECK(d.max_abs_size_dev == doctest::Approx(0.2));
    CHECK(d.final_degree_dev == doctest::Approx(-0.2));
    CHECK(d.flagged == std::vector<std::size_t>{1});
}

TEST_CASE("curve csv has one row per t") {
    ScheduleInputs in{CurveParams::thm1(0.5, 0.6), 400, 0.05, 1};
    std::ostringstream os;
    write_curve_csv(os, in, 12, zero_spec());
    std::string s = os.str();
    CHECK(s.rfind("t,x,s_ideal,g_ideal,alpha,beta,a_t,b_t,theta_t\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 14);
}
