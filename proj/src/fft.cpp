#include "tb/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace tb::fft {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int sign_of(Direction d) { return d == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD; }

}  // namespace

Plan1d::Plan1d(std::size_t n, Direction dir) : n_(n), scratch_(n) {
    std::lock_guard lock(planner_mutex());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch_.data());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign_of(dir), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_) throw std::runtime_error("fftw: 1-d plan creation failed");
}

Plan1d::~Plan1d() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void Plan1d::execute(std::vector<std::complex<double>>& data) const {
    if (data.size() != n_) throw std::invalid_argument("fft: size mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan_), p, p);
}

Plan2d::Plan2d(std::size_t n, Direction dir) : n_(n), scratch_(n * n) {
    std::lock_guard lock(planner_mutex());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch_.data());
    plan_ = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), buf, buf, sign_of(dir), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_) throw std::runtime_error("fftw: 2-d plan creation failed");
}

Plan2d::~Plan2d() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void Plan2d::execute(std::vector<std::complex<double>>& data) const {
    if (data.size() != n_ * n_) throw std::invalid_argument("fft: size mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan_), p, p);
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace tb::fft
