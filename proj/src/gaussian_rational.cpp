#include "caustic/gaussian_rational.hpp"

#include <functional>
#include <ostream>
#include <stdexcept>

namespace caustic {

GaussianRational GaussianRational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero in Q(i)");
  if (sgn(im_) == 0) return GaussianRational(mpq_class(1) / re_);
  mpq_class n = norm();
  return {re_ / n, -im_ / n};
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

std::string GaussianRational::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string imag = im_ == 1 ? "i" : (im_ == -1 ? "-i" : im_.get_str() + "*i");
  if (sgn(re_) == 0) return imag;
  std::string s = "(" + re_.get_str();
  if (sgn(im_) > 0) s += "+";
  return s + imag + ")";
}

std::size_t GaussianRational::hash() const {
  std::hash<std::string> h;
  return h(re_.get_str()) * 31u + h(im_.get_str());
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.to_string(); }

}  // namespace caustic
