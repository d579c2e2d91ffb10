#pragma once

// Thin RAII wrapper over FFTW plans. Plans are created under a global lock
// (the FFTW planner is not re-entrant); execution is thread-safe per plan
// owner.

#include <complex>
#include <cstddef>
#include <vector>

namespace tb::fft {

enum class Direction { Forward, Backward };

/// Unnormalised in-place DFT. Forward uses exp(-2 pi i jk/N).
class Plan1d {
public:
    Plan1d(std::size_t n, Direction dir);
    ~Plan1d();
    Plan1d(const Plan1d&) = delete;
    Plan1d& operator=(const Plan1d&) = delete;

    void execute(std::vector<std::complex<double>>& data) const;
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    void* plan_;
    mutable std::vector<std::complex<double>> scratch_;
};

/// Unnormalised in-place 2-D DFT over row-major n x n data.
class Plan2d {
public:
    Plan2d(std::size_t n, Direction dir);
    ~Plan2d();
    Plan2d(const Plan2d&) = delete;
    Plan2d& operator=(const Plan2d&) = delete;

    void execute(std::vector<std::complex<double>>& data) const;
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    void* plan_;
    mutable std::vector<std::complex<double>> scratch_;
};

std::size_t next_pow2(std::size_t n);

}  // namespace tb::fft
