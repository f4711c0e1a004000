// Power-of-two FFT, centered unitary Fourier transforms on symmetric grids,
// the Bluestein chirp transform for arbitrarily scaled kernels, and the 2-D
// space-time transform pair behind the frequency cutoffs.
#pragma once

#include "wfqh/grid.hpp"
#include "wfqh/numerics.hpp"

namespace wfqh {

// In-place radix-2 transform, sum_j a_j e^{sign * 2 pi i jk / N}. No 1/N.
void fft_pow2(CVec& a, int sign);

// out_k = scale * sum_j f_j e^{sign * i * x_j * xi_k} on the self-reciprocal
// lattice x_j = (j - N/2) dx, xi_k = (k - N/2) dxi, dxi = 2 pi / (N dx).
// scale = dx / sqrt(2 pi) makes the pair (sign -1, dx), (sign +1, dxi) unitary.
CVec centered_ft(const CVec& f, double dx, int sign);
double reciprocal_spacing(int n, double dx);

// out_k = sum_j f_j e^{-i theta (j - N/2)(k - N/2)} for arbitrary real theta,
// via chirp factorization and one circular convolution of length 2N.
CVec scaled_cdft(const CVec& f, double theta);

// Frequency-side samples of a space-time field, rows indexed by tau.
struct SpectralField {
    int n_t = 0, n_x = 0;
    double dtau = 0.0, dxi = 0.0;
    std::vector<CVec> rows;

    double tau(int m) const { return (m - n_t / 2) * dtau; }
    double xi(int k) const { return (k - n_x / 2) * dxi; }
};

// Unitary on both axes: spectral_norm(field_ft2(u)) = field_norm(u) exactly.
// The time axis is transformed about the window midpoint, which drops a pure
// phase per tau row; radial multipliers and norms are unaffected.
SpectralField field_ft2(const SpaceTimeField& u, int threads = 1);
void field_ift2_into(const SpectralField& g, SpaceTimeField& u, int threads = 1);

double spectral_norm(const SpectralField& g);

}  // namespace wfqh
