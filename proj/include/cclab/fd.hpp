#ifndef CCLAB_FD_HPP
#define CCLAB_FD_HPP

namespace cclab {

// Central finite-difference steps on normalized inputs: 1e-5 for first
// derivatives, 1e-4 for second derivatives.
inline constexpr double kFdStepFirst = 1e-5;
inline constexpr double kFdStepSecond = 1e-4;

// f takes a scalar offset; result type must support +,-,* by double.
template <class F>
auto fd_central(F&& f, double h = kFdStepFirst) {
    return (f(h) - f(-h)) * (0.5 / h);
}

// 4th-order five-point first derivative.
template <class F>
auto fd_central4(F&& f, double h = kFdStepFirst) {
    return (f(-2.0 * h) - f(2.0 * h) + 8.0 * (f(h) - f(-h))) * (1.0 / (12.0 * h));
}

template <class F>
auto fd_second(F&& f, double h = kFdStepSecond) {
    return (f(h) - 2.0 * f(0.0) + f(-h)) * (1.0 / (h * h));
}

}  // namespace cclab

#endif
