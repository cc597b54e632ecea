// Copyright 2026 The teleteach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "support.hpp"
#include "teleteach/afo.hpp"

using namespace teleteach;
using testing::Gen;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kToyOmega = 2.0 * kTwoPi * 0.3;

double toy(double t) { return 0.45 + 0.05 * std::sin(kToyOmega * t); }

// Feeds a scalar signal on coordinate 0 for `seconds` at 500 Hz.
template <typename F>
void drive(FrequencyEstimator& fe, F&& signal, double t0, double seconds, double mu = 0.0) {
  const double dt = 2e-3;
  const auto n = static_cast<long>(std::lround(seconds / dt));
  for (long k = 0; k < n; ++k) {
    Vec6 x = Vec6::Zero();
    x[0] = signal(t0 + k * dt);
    fe.update(x, mu, dt);
  }
}

}  // namespace

TEST_SUITE("afo") {
  TEST_CASE("zero prediction error leaves the estimate alone") {
    const AfoConfig cfg;
    Gen g(30);
    for (int i = 0; i < 100; ++i) {
      AfoState st = AfoState::initial(cfg);
      st.phi = g.uniform(0, kTwoPi);
      st.omega = g.uniform(1, 10);
      for (Eigen::Index c = 0; c < st.alpha.size(); ++c) {
        st.alpha[c] = g.uniform(-1, 1);
        st.beta[c] = g.uniform(-1, 1);
      }
      const AfoState next = afo_step(st, st.prediction(), 0.0, 2e-3, cfg);
      CHECK(next.omega == st.omega);
      CHECK(next.alpha == st.alpha);
      CHECK(next.beta == st.beta);
      CHECK(next.phi == doctest::Approx(std::fmod(st.phi + st.omega * 2e-3, kTwoPi)).epsilon(1e-15));
    }
  }

  TEST_CASE("mu = 1 freezes frequency and coefficients, phase runs on") {
    const AfoConfig cfg;
    Gen g(31);
    AfoState st = AfoState::initial(cfg);
    st.omega = 2.7;
    st.alpha[1] = 0.3;
    for (int k = 0; k < 5000; ++k) {
      const double phi = st.phi;
      const double y = g.uniform(-1, 1);
      const AfoState next = afo_step(st, y, 1.0, 2e-3, cfg);
      CHECK(next.omega == st.omega);
      CHECK(next.alpha == st.alpha);
      CHECK(next.beta == st.beta);
      const double exact = afo_step(st, st.prediction(), 1.0, 2e-3, cfg).phi;
      CHECK(exact == doctest::Approx(std::fmod(phi + 2.7 * 2e-3, kTwoPi)).epsilon(1e-12));
      st = next;
    }
    CHECK(st.omega == 2.7);
  }

  TEST_CASE("estimate stays within its bounds") {
    AfoConfig cfg;
    cfg.omega_min = 1.0;
    cfg.omega_max = 5.0;
    cfg.k_omega = 1e4;
    Gen g(32);
    AfoState st = AfoState::initial(cfg);
    for (int k = 0; k < 20000; ++k) {
      st = afo_step(st, g.uniform(-10, 10), 0.0, 2e-3, cfg);
      REQUIRE(st.omega >= 1.0);
      REQUIRE(st.omega <= 5.0);
      REQUIRE(st.phi >= 0.0);
      REQUIRE(st.phi < kTwoPi);
    }
  }

  TEST_CASE("toy signal: converges within 5% in 20 s") {
    FrequencyEstimator fe{AfoConfig{}};
    drive(fe, toy, 0.0, 20.0);
    CHECK(fe.omega() == doctest::Approx(kToyOmega).epsilon(0.05));
    CHECK(fe.averaged_omega() == doctest::Approx(kToyOmega).epsilon(0.05));
    CHECK(fe.input_dim() == 0);
  }

  TEST_CASE("toy signal: raw oscillator without conditioning collapses") {
    // The offset dominates the unconditioned error signal.
    const AfoConfig cfg;
    AfoState st = AfoState::initial(cfg);
    for (int k = 0; k < 10000; ++k) st = afo_step(st, toy(k * 2e-3), 0.0, 2e-3, cfg);
    CHECK(std::abs(st.omega / kToyOmega - 1.0) > 0.05);
  }

  TEST_CASE("frequency is exactly frozen at mu = 1") {
    FrequencyEstimator fe{AfoConfig{}};
    drive(fe, toy, 0.0, 20.0);
    drive(fe, toy, 20.0, 2.0, 0.5);
    drive(fe, toy, 22.0, 0.002, 1.0);
    const double frozen = fe.omega();
    const double raw = fe.state().omega;
    drive(fe, [](double t) { return 0.3 * std::sin(7.0 * t); }, 22.002, 10.0, 1.0);
    CHECK(fe.omega() == frozen);
    CHECK(fe.state().omega == raw);
    CHECK(frozen == fe.averaged_omega());
  }

  TEST_CASE("reported frequency blends toward the period average with mu") {
    FrequencyEstimator fe{AfoConfig{}};
    drive(fe, toy, 0.0, 10.0, 0.25);
    const double expect = 0.75 * fe.state().omega + 0.25 * fe.averaged_omega();
    CHECK(fe.omega() == doctest::Approx(expect).epsilon(1e-15));
  }

  TEST_CASE("property: converges from within a factor 2 on pure tones") {
    Gen g(33);
    for (int i = 0; i < 25; ++i) {
      const double w = g.uniform(std::numbers::pi, 15.0);
      AfoConfig cfg;
      cfg.omega0 = std::clamp(w * std::exp2(g.uniform(-0.99, 0.99)), cfg.omega_min, cfg.omega_max);
      const double amp = g.uniform(0.01, 0.2), off = g.uniform(-0.5, 0.5), ph = g.uniform(0, kTwoPi);
      FrequencyEstimator fe(cfg);
      drive(fe, [&](double t) { return off + amp * std::sin(w * t + ph); }, 0.0, 20.0);
      INFO("w = " << w << ", omega0 = " << cfg.omega0);
      CHECK(fe.omega() == doctest::Approx(w).epsilon(0.05));
    }
  }

  TEST_CASE("drive conditioning removes the offset and fixes the amplitude") {
    AfoConfig cfg;
    DriveConditioner dc(cfg);
    const double dt = 2e-3;
    double peak = 0.0, sum = 0.0;
    long n = 0;
    for (long k = 0; k < 30000; ++k) {
      const double out = dc.push(toy(k * dt), 0.2, dt);
      if (k * dt > 40.0) {
        peak = std::max(peak, std::abs(out));
        sum += out;
        ++n;
      }
    }
    CHECK(peak == doctest::Approx(0.2).epsilon(0.03));
    CHECK(std::abs(sum / n) < 0.01);
    DriveConditioner quiet(cfg);
    for (int k = 0; k < 100; ++k) CHECK(quiet.push(0.45, 1.0, dt) == 0.0);
  }

  TEST_CASE("activity window variance matches a direct computation") {
    Gen g(34);
    ActivityWindow w;
    std::deque<Vec6> ref;
    for (int k = 0; k < 500; ++k) {
      const Vec6 x = g.vec6(2.0);
      w.push(x, 37);
      ref.push_back(x);
      if (ref.size() > 37) ref.pop_front();
      Vec6 mean = Vec6::Zero();
      for (const Vec6& v : ref) mean += v;
      mean /= static_cast<double>(ref.size());
      Vec6 var = Vec6::Zero();
      for (const Vec6& v : ref) var += (v - mean).cwiseProduct(v - mean);
      var /= static_cast<double>(ref.size());
      CHECK((w.variance() - var).cwiseAbs().maxCoeff() < 1e-9);
    }
    w.clear();
    CHECK(w.variance().isZero());
  }

  TEST_CASE("input selection follows the most active coordinate") {
    FrequencyEstimator fe{AfoConfig{}};
    const double dt = 2e-3;
    for (long k = 0; k < 5000; ++k) {
      Vec6 x = Vec6::Zero();
      x[2] = 0.05 * std::sin(2.0 * k * dt);
      x[4] = 0.01 * std::sin(2.0 * k * dt);
      fe.update(x, 0.0, dt);
    }
    CHECK(fe.input_dim() == 2);
    for (long k = 0; k < 5000; ++k) {
      Vec6 x = Vec6::Zero();
      x[4] = 0.2 * std::sin(2.0 * k * dt);
      fe.update(x, 0.5, dt);
    }
    CHECK(fe.input_dim() == 2);  // no reselection at high mu
  }

  TEST_CASE("validation") {
    AfoConfig c;
    c.omega0 = 30.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = AfoConfig{};
    c.switch_ratio = 0.5;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = AfoConfig{};
    c.averaging_periods = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    CHECK_THROWS_AS(afo_step(AfoState::initial(AfoConfig{}), 0.0, 0.0, 0.0, AfoConfig{}), ValidationError);
  }
}
