#pragma once

#include <complex>
#include <vector>

#include "qtraj/wavefield.hpp"

namespace qtraj {

// In-place forward/backward DFT (FFTW, unnormalized backward as usual;
// these wrappers normalize the backward transform by 1/n).
void fft_forward(std::vector<cplx>& data);
void fft_backward(std::vector<cplx>& data);

// Angular wavenumbers for an n-point periodic grid of spacing dq, FFT order.
std::vector<double> fft_wavenumbers(int n, double dq);

// Midpoint discrete sine transform for Dirichlet boxes.
// Analysis:  a_n = (2/N) sum_j f_j sin(n pi (j+1/2)/N),  n = 1..N-1,
// so that f(q) = sum_n a_n sin(n pi (q-qmin)/L) exactly on the samples.
// Tables are cached per N.
struct SineTables {
    int n;
    std::vector<double> s; // s[(mode-1)*n + j] = sin(mode*pi*(j+1/2)/n)
    std::vector<double> c; // c[(mode-1)*n + j] = cos(mode*pi*(j+1/2)/n)
};
const SineTables& sine_tables(int n);

// Spectral derivative along one axis, honoring the grid's boundary kind
// (periodic FFT or Dirichlet sine series).
std::vector<cplx> gradient(const WaveField& f, int axis);
std::vector<cplx> laplacian(const WaveField& f);

} // namespace qtraj
