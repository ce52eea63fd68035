#pragma once

#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace fcp::detail {

// Owning handle for an mpfr_t.
class MpfrValue {
 public:
  explicit MpfrValue(mpfr_prec_t precision = 256) { mpfr_init2(v_, precision); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;
  ~MpfrValue() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  void set(const mpz_class& z, mpfr_rnd_t rnd = MPFR_RNDN) { mpfr_set_z(v_, z.get_mpz_t(), rnd); }
  void set(const mpq_class& q, mpfr_rnd_t rnd = MPFR_RNDN) { mpfr_set_q(v_, q.get_mpq_t(), rnd); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

}  // namespace fcp::detail
