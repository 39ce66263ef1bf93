#pragma once

#include "lqsynth/doubled.hpp"

#include <vector>

namespace lqsynth {

// One elementary optical device acting on one or two channels of a static network.
struct static_element {
    enum class op { phase_shift, beam_split, squeeze };
    op kind = op::phase_shift;
    index_t channel = 0;
    index_t channel2 = -1;  // second channel for beam_split, unused otherwise
    double theta = 0.0;     // phase angle / mixing angle
    double phi = 0.0;
    double psi = 0.0;
    double zeta = 0.0;      // beam splitter overall phase
    double x = 0.0;         // squeezing magnitude
};

// e^{i theta}, 1 x 1.
cmat phase_matrix(double theta);

// 2 x 2 unitary
//   e^{i zeta} [[ e^{i(phi+psi)/2} cos(theta/2),  e^{i(psi-phi)/2} sin(theta/2)],
//               [-e^{i(phi-psi)/2} sin(theta/2),  e^{-i(phi+psi)/2} cos(theta/2)]].
cmat beam_splitter_matrix(double theta, double phi, double psi, double zeta);

// Full 2 x 2 doubled matrix of a single-channel squeezer
//   [[ e^{i(phi+psi)} cosh x,  e^{i(psi-phi)} sinh x],
//    [ e^{i(phi-psi)} sinh x,  e^{-i(phi+psi)} cosh x]].
cmat squeezer_matrix(double x, double phi, double psi);

// Device-local matrix of an element (1x1, 2x2, or 2x2 doubled for squeezers).
cmat elementary_matrix(const static_element& e);

struct static_decomposition {
    bool passive = true;
    index_t n_channels = 0;
    // Application order: elements[0] acts on the signal first.
    std::vector<static_element> elements;
    // Factor audit for the general kind: full = dbl(u2) * squeeze(x) * dbl(u1).
    cmat u1, u2;
    rvec x;
};

struct bloch_messiah_factors {
    cmat u2;  // m x m unitary
    rvec x;   // squeezing magnitudes, descending
    cmat u1;  // m x m unitary
};

// Factors a Bogoliubov R into dbl(U2) * [[cosh X, sinh X], [sinh X, cosh X]] * dbl(U1).
// When R is unitary (X == 0) the convention is U2 := U2 U1, U1 := I.
bloch_messiah_factors bloch_messiah(const doubled_matrix& r, double tol = 1e-8);

// Triangular network of two-channel rotations and output phases multiplying to U.
// At most m(m-1)/2 beam splitters are emitted.
static_decomposition reck_decompose(const cmat& u, double tol = 1e-8);

// Unitary (passive = true, s is m x m) or Bogoliubov (s is a full 2m x 2m matrix)
// static network decomposed into elementary devices.
static_decomposition decompose_static(const cmat& s, bool passive, double tol = 1e-8);

// Multiplies the element list back together (m x m or full 2m x 2m).
cmat remultiply(const static_decomposition& dec);

}  // namespace lqsynth
