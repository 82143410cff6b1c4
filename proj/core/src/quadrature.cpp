#include "besselhardy/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <stdexcept>

namespace bh::quad {

namespace {

template <unsigned N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  Rule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  // boost stores the nonnegative half; the zero node (odd N) comes first
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(w[i]);
      continue;
    }
    r.x.push_back(-a[i]);
    r.w.push_back(w[i]);
    r.x.push_back(a[i]);
    r.w.push_back(w[i]);
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static const Rule r2 = make_rule<2>(), r4 = make_rule<4>(), r8 = make_rule<8>(),
                    r16 = make_rule<16>(), r32 = make_rule<32>();
  switch (n) {
    case 2: return r2;
    case 4: return r4;
    case 8: return r8;
    case 16: return r16;
    case 32: return r32;
  }
  throw std::invalid_argument("gauss_legendre: unsupported node count");
}

}  // namespace bh::quad
