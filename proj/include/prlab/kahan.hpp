#ifndef PRLAB_KAHAN_HPP
#define PRLAB_KAHAN_HPP

/*
 * Compensated (Kahan/Neumaier) accumulation.
 *
 * The weighted prime sums mix term magnitudes across hundreds of orders
 * (e.g. e^{-nr} decays from ~1 to ~1e-300 over one sum), and the race
 * counters accumulate tens of millions of log-terms.  Plain double
 * accumulation loses digits linearly in the term count; the Neumaier
 * variant keeps the running error in a second double, so the result is
 * correct to within a couple of ulps of the exact sum independent of
 * ordering-friendly term counts.
 *
 * Neumaier's trick over classic Kahan: the branch picks which operand's
 * low-order bits were lost, so terms larger than the running sum are
 * handled correctly as well.
 *
 * The arithmetic below must not be reassociated by the optimizer; this
 * project never enables -ffast-math, and the operations are written so
 * that each rounding the algorithm reasons about actually happens.
 */

#include <cmath>

namespace prlab {

class KahanSum {
 public:
  KahanSum() = default;
  explicit KahanSum(double v) : sum_(v) {}

  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;  // low-order bits of x were lost
    } else {
      comp_ += (x - t) + sum_;  // low-order bits of sum_ were lost
    }
    sum_ = t;
  }

  KahanSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

  // Exact internal state, for bit-faithful checkpointing.
  double raw_sum() const noexcept { return sum_; }
  double raw_comp() const noexcept { return comp_; }
  void set_raw(double sum, double comp) noexcept {
    sum_ = sum;
    comp_ = comp;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace prlab

#endif  // PRLAB_KAHAN_HPP
