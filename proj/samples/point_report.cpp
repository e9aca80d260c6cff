// Closed-form quantities and the index-count verdict for one DNLS wave.

#include <cstdio>

#include "wavestab/classify.hpp"

int main() {
  using namespace wavestab;
  const WaveParams p{1.0, 0.5, 1.0};
  const WaveProfile wave(p);
  std::printf("c = %.6f  omega = %.6f  T = %.6f\n", wave.scalars().c, wave.scalars().omega,
              wave.half_period());

  ClassifyOptions opt;
  opt.with_spectrum = true;
  const StabilityReport r = classify_dnls(p, opt);
  std::printf("pairing = %.8f  D11 = %.8f\n", r.closed.pairing, r.closed.d11);
  std::printf("n(L) = %d  n(D) = %d  det D = %.6f\n", *r.morse_L, *r.morse_D, *r.det_D);
  std::printf("max Re lambda = %.3e  verdict: %s\n", *r.max_re_lambda,
              std::string(to_string(r.verdict)).c_str());
}
