#include <cmath>

#include <gtest/gtest.h>

#include "wavestab/classify.hpp"
#include "wavestab/scan.hpp"

using namespace wavestab;

TEST(ClassifyDnls, NegativePairingIsStable) {
  const auto r = classify_dnls({2.4, 0.4, 1}, {.with_spectrum = true});
  ASSERT_LT(r.closed.pairing, 0);
  EXPECT_EQ(r.verdict, Verdict::Stable);
  EXPECT_EQ(*r.k_ham, 0);
  EXPECT_EQ(*r.morse_L, 1);
  EXPECT_EQ(*r.kernel_L, 2);
  EXPECT_EQ(*r.morse_D, 1);
  EXPECT_LT(*r.det_D, 0);
  EXPECT_LE(*r.max_re_lambda, *r.tol_unstable);
  EXPECT_FALSE(r.spectrum_mismatch);
  EXPECT_FALSE(r.stable_with_positive_d11);
}

TEST(ClassifyDnls, PositivePairingStableThroughDeterminant) {
  const auto r = classify_dnls({1, 0.5, 1}, {.with_spectrum = true});
  ASSERT_GT(r.closed.pairing, 0);
  EXPECT_EQ(r.verdict, Verdict::Stable);
  EXPECT_LT(*r.det_D, 0);
  EXPECT_EQ(*r.k_ham, 0);
  EXPECT_TRUE(r.stable_with_positive_d11);
  EXPECT_LE(*r.max_re_lambda, *r.tol_unstable);
  EXPECT_EQ(*r.real_unstable, 0);
}

TEST(ClassifyDnls, IndexCountInvariant) {
  PortableRng rng(41);
  for (int i = 0; i < 6; ++i) {
    const auto r = classify_dnls(sample_admissible(rng));
    ASSERT_TRUE(r.D && r.morse_L && r.morse_D && r.k_ham);
    EXPECT_EQ(*r.k_ham, *r.morse_L - *r.morse_D);
    EXPECT_EQ(*r.morse_L, 1);
    EXPECT_NE(r.verdict, Verdict::Undetermined);
    if (r.verdict == Verdict::Stable) EXPECT_LT(*r.det_D, 0);
  }
}

TEST(ClassifyDnls, VanishingD11StaysStable) {
  const double g = 2.4;
  const double kmax = std::sqrt(kappa_sq_upper_bound(g, 1.0));
  const auto root = pairing_zero_in_kappa(g, 1.0, 0.02 * kmax, 0.98 * kmax);
  ASSERT_TRUE(root.has_value());
  const WaveParams p{g, *root, 1.0};
  EXPECT_LE(std::abs(pairing_Lplus_inv(p)), 1e-7);  // finite-difference noise floor
  const auto r = classify_dnls(p);
  EXPECT_LE(std::abs(r.D->d11), 1e-6);
  EXPECT_GT(std::abs(r.D->d12), 1e-6);
  EXPECT_NEAR(*r.det_D, -r.D->d12 * r.D->d12, 1e-6 * r.D->frobenius_sq());
  EXPECT_EQ(r.verdict, Verdict::Stable);

  // The positive-D11 side of the root is stable too.
  const auto side = classify_dnls({g, *root - 0.02, 1.0});
  EXPECT_GT(side.closed.d11, 0);
  EXPECT_EQ(side.verdict, Verdict::Stable);
  EXPECT_TRUE(side.stable_with_positive_d11);
}

TEST(ClassifyDnls, ClosedFormOnly) {
  const auto neg = classify_dnls({2.4, 0.4, 1}, {.closed_form_only = true});
  EXPECT_EQ(neg.verdict, Verdict::Stable);
  EXPECT_FALSE(neg.D.has_value());
  EXPECT_FALSE(neg.morse_L.has_value());
  const auto pos = classify_dnls({1, 0.5, 1}, {.closed_form_only = true});
  EXPECT_EQ(pos.verdict, Verdict::Undetermined);
}

TEST(ClassifyDnls, RejectsInadmissible) {
  EXPECT_THROW(classify_dnls({3, 0.5, 1}), InadmissibleParams);
}

TEST(ClassifyQuintic, VerdictFollowsPairingSign) {
  for (double k : {0.3, 0.7}) {
    const auto r = classify_quintic(1, k, {.with_spectrum = true});
    EXPECT_NEAR(r.scalars.c, 0.0, 1e-12);
    EXPECT_EQ(r.verdict, r.closed.pairing < 0 ? Verdict::Stable : Verdict::Unstable);
    EXPECT_EQ(*r.morse_L, 1);
    EXPECT_EQ(*r.kernel_L, 2);
    EXPECT_EQ(*r.k_ham, *r.morse_L - *r.morse_D);
    // Spectrum route agrees with the pairing route.
    EXPECT_FALSE(r.spectrum_mismatch) << k;
    if (r.verdict == Verdict::Unstable) EXPECT_GE(*r.real_unstable, 1);
  }
}

TEST(ClassifyQuintic, PastThresholdUnstable) {
  const auto r = classify_quintic(1, 0.7);
  EXPECT_GT(r.closed.pairing, 0);
  EXPECT_EQ(r.verdict, Verdict::Unstable);
  EXPECT_EQ(*r.k_ham, 1);
}

TEST(ClassifyQuintic, WindingIsMassOnly) {
  const auto r = classify_quintic(1.5, 0.4, {.closed_form_only = true});
  EXPECT_NEAR(r.winding.value, -0.75 * r.closed.mass, 1e-10);
  EXPECT_FALSE(r.D.has_value());
}
