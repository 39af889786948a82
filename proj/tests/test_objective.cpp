#include "doctest.h"

#include <stdexcept>

#include "roict/objective.hpp"
#include "roict/phantom.hpp"
#include "roict/tv.hpp"
#include "roict/wavelet.hpp"
#include "support.hpp"

using namespace roict;
using namespace roict::testing;

namespace {

struct Fixture {
  SmallInstance inst;
  std::mt19937_64 rng{29};
  Eigen::VectorXd truth = random_vector(rng, 64, 0.1, 1.0);
  std::shared_ptr<const ProjectionMask> mask = std::make_shared<const ProjectionMask>(
      build_mask(inst.geometry, {Eigen::Vector2d(0.4, -0.3), 1.6}));
  std::shared_ptr<const FrameOperator> shearlets = std::make_shared<const ShearletSystem>(10, 12, 2);

  ObjectiveSpec spec(Formulation form, double lambda, double rho,
                     FrameEvaluation eval = FrameEvaluation::ExplicitOperator) const {
    ObjectiveSpec s;
    s.formulation = form;
    s.lambda = lambda;
    s.rho = rho;
    s.system = inst.system;
    s.mask = mask;
    s.y0 = truncate(inst.system->apply(truth), *mask);
    s.frame = shearlets;
    s.frame_evaluation = eval;
    return s;
  }
};

double dense_tv(const Eigen::VectorXd& f, double delta) {
  double s = 0.0;
  for (Index i = 0; i < 8; ++i) {
    for (Index j = 0; j < 8; ++j) {
      const double c = f[j * 8 + i];
      const double dx = j + 1 < 8 ? f[(j + 1) * 8 + i] - c : 0.0;
      const double dy = i + 1 < 8 ? f[j * 8 + i + 1] - c : 0.0;
      s += std::sqrt(dx * dx + dy * dy + delta * delta);
    }
  }
  return s;
}

template <typename Obj>
double fd_rel_error(const Obj& obj, const Eigen::VectorXd& x, std::mt19937_64& rng, int coords = 30) {
  Eigen::VectorXd g;
  obj.value_and_gradient(x, g);
  std::uniform_int_distribution<Index> pick(0, x.size() - 1);
  double num = 0.0;
  double den = 0.0;
  const double h = 1e-6;
  for (int c = 0; c < coords; ++c) {
    const Index i = pick(rng);
    Eigen::VectorXd a = x;
    Eigen::VectorXd b = x;
    a[i] += h;
    b[i] -= h;
    const double fd = (obj.value(a) - obj.value(b)) / (2.0 * h);
    num += (fd - g[i]) * (fd - g[i]);
    den += g[i] * g[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("formulation names") {
  CHECK(parse_formulation("implicit") == Formulation::Implicit);
  CHECK(to_string(Formulation::Explicit) == "explicit");
  CHECK_THROWS_AS(parse_formulation("both"), std::invalid_argument);
}

TEST_CASE("spec validation") {
  const Fixture fx;
  ObjectiveSpec s = fx.spec(Formulation::Implicit, 0.1, 0.1);
  CHECK_NOTHROW(s.validate());
  s.frame = nullptr;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = fx.spec(Formulation::Implicit, -1.0, 0.1);
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = fx.spec(Formulation::Implicit, 0.1, 0.1);
  s.delta = 0.0;
  CHECK_THROWS_AS(ImplicitObjective{s}, std::invalid_argument);
  s = fx.spec(Formulation::Implicit, 0.1, 0.1);
  s.upper_bound = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = fx.spec(Formulation::Implicit, 0.1, 0.1);
  s.y0 = Eigen::VectorXd::Zero(5);
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = fx.spec(Formulation::Implicit, 0.1, 0.1);
  s.frame = std::make_shared<const UndecimatedWavelet>(12, 10);
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("zero data and exact fit") {
  const Fixture fx;
  ObjectiveSpec s = fx.spec(Formulation::Implicit, 0.3, 0.2);
  s.y0.setZero();
  const ImplicitObjective zero(s);
  CHECK(zero.value(Eigen::VectorXd::Zero(64)) == doctest::Approx(0.2 * 64 * s.delta).epsilon(1e-14));

  ObjectiveSpec full = fx.spec(Formulation::Implicit, 0.0, 0.0);
  full.mask = std::make_shared<const ProjectionMask>(ProjectionMask{10, 12, Eigen::VectorXd::Ones(120)});
  full.y0 = fx.inst.system->apply(fx.truth);
  CHECK(ImplicitObjective(full).value(fx.truth) == 0.0);

  full.formulation = Formulation::Explicit;
  const ExplicitObjective ex(full);
  Eigen::VectorXd g;
  const Eigen::VectorXd x = ex.stack(fx.truth, full.y0);
  CHECK(ex.value_and_gradient(x, g) == 0.0);
  CHECK(g.isZero(1e-14));
}

TEST_CASE("values agree with a dense re-computation") {
  const Fixture fx;
  const Eigen::MatrixXd w = fx.inst.dense();
  const Eigen::VectorXd m = fx.mask->values;
  const Eigen::VectorXd c = Eigen::VectorXd::Ones(120) - m;
  REQUIRE(fx.mask->count() > 10);
  REQUIRE(fx.mask->count() < 110);
  std::mt19937_64 rng(31);
  const double lambda = 0.7;
  const double rho = 0.05;
  const Eigen::VectorXd f = random_vector(rng, 64, 0.0, 1.0);
  const Eigen::VectorXd y = random_vector(rng, 120, 0.0, 3.0);

  const ObjectiveSpec si = fx.spec(Formulation::Implicit, lambda, rho);
  const Eigen::VectorXd wf = w * f;
  const double implicit_dense = 0.5 * (m.cwiseProduct(wf) - si.y0).squaredNorm() +
                                lambda * (c.cwiseProduct(wf) + si.y0).squaredNorm() +
                                rho * dense_tv(f, si.delta);
  CHECK(ImplicitObjective(si).value(f) == doctest::Approx(implicit_dense).epsilon(1e-12));

  const ObjectiveSpec se = fx.spec(Formulation::Explicit, lambda, rho);
  const double explicit_dense = 0.5 * (m.cwiseProduct(wf) - se.y0).squaredNorm() +
                                0.5 * c.cwiseProduct(wf - y).squaredNorm() +
                                lambda * (c.cwiseProduct(y) + se.y0).squaredNorm() +
                                rho * dense_tv(f, se.delta);
  CHECK(ExplicitObjective(se).value(f, y) == doctest::Approx(explicit_dense).epsilon(1e-12));
}

TEST_CASE("gradients against central differences") {
  const Fixture fx;
  std::mt19937_64 rng(37);
  for (auto eval : {FrameEvaluation::ExplicitOperator, FrameEvaluation::TightIdentity}) {
    const ImplicitObjective imp(fx.spec(Formulation::Implicit, 0.5, 0.1, eval));
    CHECK(fd_rel_error(imp, random_vector(rng, 64, 0.0, 1.0), rng) <= 1e-5);
    const ExplicitObjective exp(fx.spec(Formulation::Explicit, 0.5, 0.1, eval));
    const Eigen::VectorXd x = exp.stack(random_vector(rng, 64, 0.0, 1.0), random_vector(rng, 120, 0.0, 2.0));
    CHECK(fd_rel_error(exp, x, rng, 60) <= 1e-5);
  }
}

TEST_CASE("unregularized gradient is the normal-equation residual") {
  const Fixture fx;
  ObjectiveSpec s = fx.spec(Formulation::Implicit, 0.0, 0.0);
  s.mask = std::make_shared<const ProjectionMask>(ProjectionMask{10, 12, Eigen::VectorXd::Ones(120)});
  std::mt19937_64 rng(41);
  s.y0 = random_vector(rng, 120);
  const Eigen::VectorXd f = random_vector(rng, 64);
  const Eigen::MatrixXd w = fx.inst.dense();
  const Eigen::VectorXd expected = w.transpose() * (w * f - s.y0);
  CHECK((ImplicitObjective(s).gradient(f) - expected).norm() <= 1e-12 * expected.norm());
}

TEST_CASE("gradient vanishes at the dense minimizer of the quadratic") {
  const Fixture fx;
  const double lambda = 0.25;
  const ObjectiveSpec s = fx.spec(Formulation::Implicit, lambda, 0.0, FrameEvaluation::TightIdentity);
  const Eigen::MatrixXd w = fx.inst.dense();
  const Eigen::VectorXd m = fx.mask->values;
  const Eigen::VectorXd c = Eigen::VectorXd::Ones(120) - m;
  const Eigen::MatrixXd hess =
      w.transpose() * m.asDiagonal() * w + 2.0 * lambda * w.transpose() * c.asDiagonal() * w;
  const Eigen::VectorXd rhs = w.transpose() * (m.cwiseProduct(s.y0) - 2.0 * lambda * c.cwiseProduct(s.y0));
  const Eigen::VectorXd fstar = hess.ldlt().solve(rhs);
  CHECK(ImplicitObjective(s).gradient(fstar).norm() <= 1e-8);
}

TEST_CASE("tight-frame elision matches the explicit operator") {
  const Fixture fx;
  std::mt19937_64 rng(43);
  const Eigen::VectorXd f = random_vector(rng, 64, 0.0, 1.0);
  const Eigen::VectorXd y = random_vector(rng, 120, 0.0, 2.0);
  for (auto form : {Formulation::Implicit, Formulation::Explicit}) {
    const ObjectiveSpec a = fx.spec(form, 0.8, 0.1, FrameEvaluation::ExplicitOperator);
    const ObjectiveSpec b = fx.spec(form, 0.8, 0.1, FrameEvaluation::TightIdentity);
    Eigen::VectorXd ga;
    Eigen::VectorXd gb;
    double va = 0.0;
    double vb = 0.0;
    if (form == Formulation::Implicit) {
      va = ImplicitObjective(a).value_and_gradient(f, ga);
      vb = ImplicitObjective(b).value_and_gradient(f, gb);
    } else {
      const ExplicitObjective ea(a);
      va = ea.value_and_gradient(ea.stack(f, y), ga);
      vb = ExplicitObjective(b).value_and_gradient(ea.stack(f, y), gb);
    }
    CHECK(std::abs(va - vb) <= 1e-10 * std::abs(va));
    CHECK((ga - gb).norm() <= 1e-10 * ga.norm());
  }
}

TEST_CASE("convexity along random segments") {
  const Fixture fx;
  const ImplicitObjective obj(fx.spec(Formulation::Implicit, 0.4, 0.2));
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd a = random_vector(rng, 64, 0.0, 1.0);
    const Eigen::VectorXd b = random_vector(rng, 64, 0.0, 1.0);
    const double t = u(rng);
    CHECK(obj.value(t * a + (1 - t) * b) <= t * obj.value(a) + (1 - t) * obj.value(b) + 1e-10);
  }
}

TEST_CASE("support identity of the data term") {
  const Fixture fx;
  ObjectiveSpec a = fx.spec(Formulation::Implicit, 0.4, 0.0);
  ObjectiveSpec b = a;
  b.y0 = truncate(a.y0, *a.mask);
  std::mt19937_64 rng(53);
  const Eigen::VectorXd f = random_vector(rng, 64, 0.0, 1.0);
  CHECK(ImplicitObjective(a).value(f) == ImplicitObjective(b).value(f));
}

TEST_CASE("projection and feasibility") {
  const Fixture fx;
  ObjectiveSpec s = fx.spec(Formulation::Explicit, 0.1, 0.1);
  s.upper_bound = 0.5;
  const ExplicitObjective obj(s);
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(obj.size(), -1.0, 1.0);
  CHECK_FALSE(obj.feasible(x));
  obj.project(x);
  CHECK(obj.feasible(x));
  CHECK(x.head(64).maxCoeff() <= 0.5);
  CHECK(x.tail(120).maxCoeff() == 1.0);
  CHECK(x.minCoeff() == 0.0);
  CHECK_THROWS_AS(obj.value(Eigen::VectorXd::Zero(10)), std::invalid_argument);
  CHECK_THROWS_AS(obj.stack(Eigen::VectorXd::Zero(64), Eigen::VectorXd::Zero(3)), std::invalid_argument);
  const ImplicitObjective imp(fx.spec(Formulation::Implicit, 0.1, 0.1));
  CHECK_THROWS_AS(imp.value(Eigen::VectorXd::Zero(63)), std::invalid_argument);
}
