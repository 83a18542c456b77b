#ifndef MIXLIM_ERRORS_HPP
#define MIXLIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mixlim {

/// A numerical integral failed to reach its error target. The message carries
/// the integration range and the achieved error estimate.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested (alpha, gamma1, gamma2) lies on a regime boundary or outside
/// every limit theorem, so no normalization is defined.
class NoTheoremError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mixlim

#endif  // MIXLIM_ERRORS_HPP
