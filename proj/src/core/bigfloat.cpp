#include "core/bigfloat.hpp"

#include <cstdio>
#include <cstdlib>

namespace steffkit {

BigReal BigReal::from_string(std::string_view text, unsigned bits) {
  BigReal r(bits);
  std::string buf(text);
  char* end = nullptr;
  int rc = mpfr_strtofr(r.raw(), buf.c_str(), &end, 10, MPFR_RNDN);
  (void)rc;
  if (end == buf.c_str() || *end != '\0')
    throw InvalidArgument("not a valid decimal number: '" + buf + "'");
  return r;
}

std::string BigReal::to_string(int sig_digits) const {
  if (sig_digits < 1) sig_digits = 1;
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Re", sig_digits - 1, v_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

}  // namespace steffkit
