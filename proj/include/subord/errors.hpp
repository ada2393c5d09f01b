#ifndef SUBORD_ERRORS_HPP
#define SUBORD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace subord {

// Lévy density fails the integrability probe, or the tail is not integrable at 0.
class integrability_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The two inversion routes disagree beyond the configured tolerance.
class inversion_disagreement : public std::runtime_error {
 public:
  inversion_disagreement(const std::string& what, double contour_value, double real_value)
      : std::runtime_error(what), contour_value_(contour_value), real_value_(real_value) {}
  double contour_value() const noexcept { return contour_value_; }
  double real_value() const noexcept { return real_value_; }

 private:
  double contour_value_;
  double real_value_;
};

// A transform cannot be evaluated where an inversion method needs it.
class evaluator_domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Truncation of a u-integral could not be certified below the requested mass.
class truncation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sampler exceeded its iteration guard.
class sampler_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace subord

#endif  // SUBORD_ERRORS_HPP
