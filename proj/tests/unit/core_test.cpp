#include <algorithm>
#include <numeric>

#include "support.hpp"

#include "jensen/oracle.hpp"

using namespace jensen;
using jensen::testing::square_instance;

TEST_CASE("catalog values and derivatives") {
  CHECK(eval_f(FunctionSpec::square(), 0.5L) == 0.25L);
  CHECK(eval_f(FunctionSpec::square(), 0) == 0);
  CHECK(eval_f(FunctionSpec::xlogx(), 1) == 0);
  CHECK(eval_f_derivative(FunctionSpec::square(), 0.5L) == 1);
  CHECK(eval_f_derivative(FunctionSpec::exp(), 0) == 1);
  CHECK_NEAR(eval_f_derivative(FunctionSpec::power(3), 2), 12, 1e-15L);
  CHECK_NEAR(eval_f(FunctionSpec::abs_power(4), -2), 16, 1e-15L);
  CHECK_NEAR(eval_f(FunctionSpec::square(3), 2), 12, 0);
}

TEST_CASE("catalog domains") {
  CHECK_THROWS_AS((void)FunctionSpec::xlogx()(0), DomainError);
  CHECK_THROWS_AS((void)FunctionSpec::power(2)(-0.5L), DomainError);
  CHECK_NOTHROW((void)FunctionSpec::power(2)(0));
  CHECK_THROWS_AS((void)FunctionSpec::power(0.5L), InputError);
  CHECK_THROWS_AS((void)FunctionSpec::abs_power(1.5L), InputError);
  CHECK_THROWS_AS((void)FunctionSpec::make(FunctionKind::Square, 2.0L), InputError);
  CHECK_THROWS_AS((void)FunctionSpec::make(FunctionKind::Power, std::nullopt), InputError);
  CHECK(parse_function_kind("abspower") == FunctionKind::AbsPower);
  CHECK_FALSE(parse_function_kind("cosh").has_value());
}

TEST_CASE("modulus values") {
  CHECK(eval_phi(ModulusSpec(1, 2), 0.5L) == 0.25L);
  CHECK(eval_phi(ModulusSpec(0.125L, 4), 1) == 0.125L);
  CHECK(eval_phi(ModulusSpec(3, 2), 0) == 0);
  CHECK(eval_phi(ModulusSpec(0.125L, 4), 0) == 0);
  CHECK_THROWS_AS((void)ModulusSpec(1, 2)(-0.1L), InputError);
  CHECK_THROWS_AS((void)ModulusSpec(0, 2), InputError);
  CHECK_THROWS_AS((void)ModulusSpec(1, 1.5L), InputError);
}

TEST_CASE("modulus is nondecreasing on a 1000-point grid") {
  for (const auto& phi : {ModulusSpec(1, 2), ModulusSpec(0.125L, 4), ModulusSpec(2.5L, 3)}) {
    Real prev = 0;
    for (int i = 0; i <= 1000; ++i) {
      const Real v = phi(3 * Real(i) / 1000);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("weight vectors") {
  const WeightVector w{0.25L, 0.75L};
  CHECK(w.nonnegative());
  CHECK(w.strictly_positive());
  CHECK_THROWS_AS(WeightVector({0.2L, 0.7L}), InputError);
  CHECK_THROWS_AS(WeightVector(std::vector<Real>{}), InputError);
  CHECK_NOTHROW(WeightVector({0.5L, 0.5L + 5e-10L}));
  const WeightVector nearly{0.5L, 0.5L + 5e-10L};
  CHECK_NEAR(nearly[0] + nearly[1], 1, 1e-18L);
  const WeightVector signed_w{1.2L, -0.2L};
  CHECK_FALSE(signed_w.nonnegative());
  CHECK(WeightVector::point_mass(3, 1)[1] == 1);
  CHECK(WeightVector::uniform(4)[3] == 0.25L);
}

TEST_CASE("jensen functional") {
  const auto sq = FunctionSpec::square();
  const std::vector<Real> x2{0, 1}, x3{0, 1, 2};
  CHECK_NEAR(jensen_functional(sq, x2, WeightVector{0.5L, 0.5L}), 0.25L, 1e-18L);
  CHECK_NEAR(jensen_functional(sq, x3, WeightVector::uniform(3)), Real{2} / 3, 1e-18L);
  CHECK_NEAR(jensen_functional(sq, x3, WeightVector{0.4L, 0.1L, 0.5L}), 0.89L, 1e-17L);
  CHECK(jensen_functional(FunctionSpec::exp(), x3, WeightVector::point_mass(3, 0)) == 0);
}

TEST_CASE("barycenter") {
  const std::vector<Real> x2{0, 1}, x3{0, 1, 2};
  CHECK(barycenter(x2, WeightVector{0.5L, 0.5L}) == 0.5L);
  CHECK(barycenter(x2, WeightVector{0.25L, 0.75L}) == 0.75L);
  CHECK_NEAR(barycenter(x3, WeightVector{0.4L, 0.1L, 0.5L}), 1.1L, 1e-18L);
}

TEST_CASE("increasing rearrangement") {
  const WeightVector p{0.2L, 0.3L, 0.5L}, q = WeightVector::uniform(3);
  const std::vector<Real> x{2, 0, 1};
  const auto r = increasing_rearrangement(x, p, q);
  CHECK(r.sorted == std::vector<Real>{0, 1, 2});
  CHECK(r.p_bar == std::vector<Real>{p[1], p[2], p[0]});
  CHECK(r.perm == std::vector<std::size_t>{1, 2, 0});

  const auto id = increasing_rearrangement(std::vector<Real>{0, 1, 2}, p, q);
  CHECK(id.perm == std::vector<std::size_t>{0, 1, 2});

  const auto tie = increasing_rearrangement(std::vector<Real>{1, 1, 0}, p, q);
  CHECK(tie.perm == std::vector<std::size_t>{2, 0, 1});
  CHECK(tie.p_bar == std::vector<Real>{p[2], p[0], p[1]});

  std::vector<Real> xr, pr, qr;
  r.restore(xr, pr, qr);
  CHECK(xr == x);
  CHECK(pr == std::vector<Real>(p.begin(), p.end()));
}

TEST_CASE("validate_instance messages") {
  const Interval iv{0, 1};
  const auto uniform = square_instance({0, 1}, WeightVector{0.5L, 0.5L}, WeightVector{0.5L, 0.5L}, iv);
  CHECK(validate_instance(uniform, TheoremMode::PointwiseRatio).empty());

  const auto zero_q = square_instance({0, 1}, WeightVector{0.5L, 0.5L}, WeightVector{1, 0}, iv);
  const auto v = validate_instance(zero_q, TheoremMode::PointwiseRatio);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "q_i > 0 fails at i=2");

  const auto signed_p = square_instance({0, 1}, WeightVector{1.2L, -0.2L}, WeightVector{0.5L, 0.5L}, iv);
  const auto w = validate_instance(signed_p, TheoremMode::PrefixRatio);
  REQUIRE(!w.empty());
  CHECK(w[0].find("prefix sum 1.2") == 0);
  CHECK_THROWS_AS(require_admissible(signed_p, TheoremMode::PrefixRatio), PreconditionError);

  const auto no_phi = validate_instance(uniform, TheoremMode::Modulus);
  CHECK(std::find(no_phi.begin(), no_phi.end(), "a modulus phi is required") != no_phi.end());
}

TEST_CASE("instance construction") {
  const Interval iv{0, 1};
  CHECK_THROWS_AS(square_instance({0.5L}, WeightVector{1}, WeightVector{1}, iv), InputError);
  CHECK_THROWS_AS(square_instance({0, 2}, WeightVector{0.5L, 0.5L}, WeightVector{0.5L, 0.5L}, iv), InputError);
  CHECK_THROWS_AS(Instance({0.5L, 1}, WeightVector{0.5L, 0.5L}, WeightVector{0.5L, 0.5L}, FunctionSpec::xlogx(),
                           Interval{0, 1}),
                  DomainError);
  CHECK_THROWS_AS(square_instance({0, 1}, WeightVector{0.5L, 0.3L, 0.2L}, WeightVector{0.5L, 0.5L}, iv), InputError);
}

TEST_CASE("functional properties over random instances") {
  FuzzConfig cfg;
  cfg.trials = 500;
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    const auto inst = random_instance(cfg, i);
    const Real j = jensen_functional(inst.f(), inst.x(), inst.p());
    const Real scale = std::fabs(j) + 1;
    CHECK(j >= -Tolerance{}.bound(scale));

    std::vector<std::size_t> perm(inst.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    const auto flipped = inst.permuted(perm);
    CHECK_NEAR(jensen_functional(flipped.f(), flipped.x(), flipped.p()), j, 1e-15L * scale);

    const auto r = increasing_rearrangement(inst);
    std::vector<Real> xr, pr, qr;
    r.restore(xr, pr, qr);
    CHECK(std::equal(xr.begin(), xr.end(), inst.x().begin()));
    CHECK(std::equal(pr.begin(), pr.end(), inst.p().begin()));
    CHECK(std::equal(qr.begin(), qr.end(), inst.q().begin()));

    Real sx = 0, sxx = 0;
    for (std::size_t k = 0; k < inst.size(); ++k) {
      sx += inst.p()[k] * inst.x()[k];
      sxx += inst.p()[k] * inst.x()[k] * inst.x()[k];
    }
    const Real var = jensen_functional(FunctionSpec::square(), inst.x(), inst.p());
    CHECK_NEAR(var, sxx - sx * sx, 1e-12L * std::max(std::fabs(sxx), Real{1e-300}));
  }
}

TEST_CASE("tolerance") {
  const Tolerance tol;
  CHECK(tol.bound(0) == 1e-10L);
  CHECK(tol.accepts(-1e-10L, 0));
  CHECK_FALSE(tol.accepts(-2e-10L, 0));
  CHECK(tol.accepts(-1.05e-9L, 1));
  CHECK_FALSE(tol.accepts(-1.15e-9L, 1));
  CHECK(format_real(0.1L) == "0.10000000000000001");
}
