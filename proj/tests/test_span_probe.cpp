#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qcspan/gallery.hpp"
#include "qcspan/span_probe.hpp"
#include "support/worked_fixtures.hpp"
#include "support/test_util.hpp"

using namespace qcspan;

TEST_CASE("mesh families") {
  const MeshFamily dy = MeshFamily::dyadic();
  REQUIRE(dy.mesh_for_level(3).cell_count_x() == 8);
  REQUIRE(dy.mesh_for_level(3).max_gap() == Rational(1, 8));

  const Mesh thirds = Mesh::equidistant(3);
  const MeshFamily al = MeshFamily::aligned(thirds);
  const Mesh level2 = al.mesh_for_level(2);
  // contains both the base thirds and the dyadic quarters
  for (const Rational& x : thirds.xs())
    REQUIRE(std::find(level2.xs().begin(), level2.xs().end(), x) != level2.xs().end());
  REQUIRE(std::find(level2.xs().begin(), level2.xs().end(), Rational(1, 4)) !=
          level2.xs().end());
  REQUIRE_ERRC(dy.mesh_for_level(0), Errc::InvalidArgument);
}

TEST_CASE("alpha sequences") {
  const auto pi_seq = alpha_sequence(named("pi"), MeshFamily::dyadic(), 5);
  for (const AlphaEntry& e : pi_seq) REQUIRE(e.alpha == 1);

  const ContinuousQC q1 = extend(fixtures::q1());
  const auto q1_seq =
      alpha_sequence(q1, MeshFamily::aligned(fixtures::q1().mesh()), 5);
  for (const AlphaEntry& e : q1_seq) REQUIRE(e.alpha == 2);

  const ContinuousQC cx = counterexample();
  const MeshFamily blocks =
      MeshFamily::aligned([cx](int level) { return cx.alignment_hint(level); });
  const auto cx_seq = alpha_sequence(cx, blocks, 4);
  // the middle column of the newest block attains the maximum exactly
  for (const AlphaEntry& e : cx_seq) REQUIRE(e.alpha == e.level + 1);
}

TEST_CASE("alpha never decreases under nested refinement") {
  for (const ContinuousQC& target : {extend(fixtures::q2()), extend(fixtures::q1())}) {
    const auto seq = alpha_sequence(target, MeshFamily::dyadic(), 5);
    for (std::size_t k = 1; k < seq.size(); ++k) REQUIRE(seq[k - 1].alpha <= seq[k].alpha);
  }
}

TEST_CASE("verdicts") {
  const auto pi_rep = span_verdict(alpha_sequence(named("pi"), MeshFamily::dyadic(), 4));
  REQUIRE(pi_rep.verdict == SpanVerdict::InSpan);
  REQUIRE(norm_estimate(pi_rep) == 1);

  const ContinuousQC q1 = extend(fixtures::q1());
  const auto q1_rep = span_verdict(
      alpha_sequence(q1, MeshFamily::aligned(fixtures::q1().mesh()), 5));
  REQUIRE(q1_rep.verdict == SpanVerdict::InSpan);
  REQUIRE(norm_estimate(q1_rep) == 3);

  const ContinuousQC q2 = extend(fixtures::q2());
  const auto q2_rep = span_verdict(
      alpha_sequence(q2, MeshFamily::aligned(fixtures::q2().mesh()), 5));
  REQUIRE(q2_rep.verdict == SpanVerdict::InSpan);
  REQUIRE(norm_estimate(q2_rep) == 5);

  const ContinuousQC cx = counterexample();
  const MeshFamily blocks =
      MeshFamily::aligned([cx](int level) { return cx.alignment_hint(level); });
  const SpanReport cx_rep = span_verdict(alpha_sequence(cx, blocks, 5));
  REQUIRE(cx_rep.verdict == SpanVerdict::LikelyNotInSpan);
  REQUIRE_ERRC(norm_estimate(cx_rep), Errc::NotInSpan);

  REQUIRE_ERRC(span_verdict(alpha_sequence(named("pi"), MeshFamily::dyadic(), 3)),
               Errc::TooFewLevels);
}

TEST_CASE("constructive split") {
  const ConstructiveSplit pi_split =
      constructive_split(named("pi"), MeshFamily::dyadic(), 3);
  REQUIRE(pi_split.q_is_copula);
  REQUIRE(pi_split.alpha == 1);
  REQUIRE_FALSE(pi_split.D.has_value());

  const ContinuousQC q1 = extend(fixtures::q1());
  const MeshFamily aligned = MeshFamily::aligned(fixtures::q1().mesh());
  const ConstructiveSplit split = constructive_split(q1, aligned, 2);
  REQUIRE(split.alpha == 2);
  REQUIRE_FALSE(split.q_is_copula);
  REQUIRE(split.D.has_value());
  REQUIRE(split.min_cell_mass >= -1e-9);
  REQUIRE(split.d_copula_ok);

  // reconstruction alpha*C + (1 - alpha)*D = Q at sampled rational points
  const Rational a = split.alpha;
  for (int k = 0; k <= 9; ++k)
    for (int l = 0; l <= 9; ++l) {
      const Rational x(k, 9), y(l, 9);
      REQUIRE(a * split.C.exact(x, y) + (1 - a) * split.D->exact(x, y) == q1.exact(x, y));
    }

  // on the dyadic family the counterexample keeps negative cells as the
  // level grows: no finite level yields a copula complement
  const ContinuousQC cx = counterexample();
  for (int level : {5, 6, 7}) {
    const ConstructiveSplit cx_split = constructive_split(cx, MeshFamily::dyadic(), level);
    REQUIRE_FALSE(cx_split.q_is_copula);
    REQUIRE(cx_split.min_cell_mass < -1e-9);
    REQUIRE_FALSE(cx_split.d_copula_ok);
  }
}
