#pragma once

// Brute-force semiclassical Maxwell-Bloch integrator for the driven tripod
// medium: two probe envelopes coupled to the full ten-variable atomic state
// (six coherences + four populations) at every grid plane.
//
// The integrator works in the co-moving frame (z, tau = t - z/c). In these
// coordinates the advection operator reduces to c d/dz at fixed tau, so every
// constant-tau row of the grid lies exactly on a vacuum light-cone
// characteristic and the transport is integrated exactly; c drops out of the
// interior equations and reappears only when mapping back to lab time.
// Atoms at each plane are advanced in tau by RK4 (method of lines); the field
// at each plane is the boundary value plus a cumulative quadrature of the
// polarization source along z, evaluated with fourth-order panels so the
// overall scheme converges at fourth order in (dz, dt).

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "tripod/params.hpp"

namespace tripod {

// Atomic state at one grid plane. sXY is the coherence between levels X and Y,
// pX the population of level X.
struct AtomicState {
  std::complex<double> s12, s13, s14, s23, s24, s34;
  double p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0;

  // Optically pumped initial state: populations 1/2 in |1> and |2>.
  static AtomicState ground_half();

  double trace() const { return p1 + p2 + p3 + p4; }
  // |s_xy|^2 <= p_x p_y + slack for all six pairs.
  bool positivity_ok(double slack = 1e-9) const;
};

// How gamma_c moves ground-state population (its action on the ground
// coherences is fixed). `pair` equalizes only the optically pumped pair
// |1>,|2> and leaves |4> alone, which keeps the weak-probe populations at 1/2
// exactly; `all_ground` equalizes all three ground states.
enum class GroundMixing { pair, all_ground };

// Solver configuration in primitive physical quantities. Only the combination
// N g^2 = a0 c Gamma / 2 enters the field equation, so the coupling is carried
// by a0; a0 = 0 is a vacuum run.
struct MbConfig {
  double gamma = 0.0;    // rad/s
  double gamma_c = 0.0;  // rad/s
  double delta = 0.0;    // probe carrier detuning omega_p - omega_31, rad/s
  double zeeman = 0.0;   // ground Zeeman shift Delta, rad/s
  double delta_d = 0.0;  // drive detuning, rad/s
  std::complex<double> omega_rabi{0.0, 0.0};  // rad/s
  double a0 = 0.0;       // cm^-1
  double length = 0.0;   // cm
  std::array<double, 3> branching{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};  // |3> -> |1>,|2>,|4>
  GroundMixing mixing = GroundMixing::pair;

  static MbConfig from(const MediumParams& p, const DerivedParams& d,
                       const DriveZeemanConfig& z);
  void validate() const;

  double delta1() const { return delta - zeeman; }
  double delta2() const { return delta + zeeman; }
};

// One RK4 step of the ten-variable atomic system at fixed local fields
// u1 = g E_1, u2 = g E_2 (Rabi units, rad/s). Requires dt * gamma < 0.1.
AtomicState evolve_atom(const AtomicState& s, std::complex<double> u1,
                        std::complex<double> u2, const MbConfig& cfg, double dt);

// Boundary pulse envelope at z = 0. `duration` is the FWHM of the amplitude
// envelope; flat_top interprets it as the plateau width with 10% edges.
struct PulseSpec {
  enum class Shape { gaussian, sech, flat_top };
  Shape shape = Shape::gaussian;
  double peak_rabi = 0.0;  // rad/s
  double duration = 0.0;   // s
  double center = 0.0;     // s

  void validate() const;
  double operator()(double t) const;
};

struct GridSpec {
  int nz = 0;             // spatial steps (nz + 1 planes over [0, L])
  int nt = 0;             // retarded-time samples (nt - 1 steps)
  double t_window = 0.0;  // s, tau in [0, t_window]
};

struct RecordPolicy {
  enum class Mode { boundaries, full, strided };
  Mode mode = Mode::boundaries;
  int z_stride = 1;
  int t_stride = 1;
  std::size_t memory_cap = 200000000;  // complex samples
};

// Sampled complex envelopes on the (z, tau) grid, Rabi units (rad/s).
// tau = t - z/c is retarded time; the lab time of sample (iz, it) is
// tau_it + z_iz / c. Boundary/output series are always recorded at full time
// resolution; the interior block honours the RecordPolicy strides and may be
// empty.
struct SpaceTimeField {
  double length = 0.0;  // cm
  double dz = 0.0;      // cm, interior record spacing
  double dt = 0.0;      // s, interior record spacing
  int nz = 0, nt = 0;   // interior record dimensions (0 if not recorded)
  int z_stride = 1, t_stride = 1;
  std::vector<std::complex<double>> e1, e2;  // row-major [iz][it]

  int nt_full = 0;
  double dt_full = 0.0;
  std::vector<std::complex<double>> in1, in2;    // z = 0
  std::vector<std::complex<double>> out1, out2;  // z = L

  const std::complex<double>& at1(int iz, int it) const { return e1[static_cast<std::size_t>(iz) * nt + it]; }
  const std::complex<double>& at2(int iz, int it) const { return e2[static_cast<std::size_t>(iz) * nt + it]; }
};

// Full co-moving-frame integration. The solver is regime-agnostic: strong
// probes and short pulses are allowed, it is the oracle that maps where the
// analytic solutions break.
SpaceTimeField propagate(const PulseSpec& pulse1, const PulseSpec& pulse2,
                         const MbConfig& cfg, const GridSpec& grid,
                         const RecordPolicy& policy = {});

// Comparison of a solver run against the analytic weak-field solution.
struct MbAnalysis {
  double delay_expected = 0.0;  // lab-frame group delay L/v_g, s
  double delay_measured = 0.0;  // centroid delay + L/c, s
  double delay_rel_err = 0.0;
  double l2_err_1 = 0.0;  // relative L2 envelope error vs analytic
  double l2_err_2 = 0.0;
  double phase_diff_measured = 0.0;  // arg(u2 conj u1) at output peak, rad
  double phase_diff_expected = 0.0;  // 2 Phi(L), rad
  double phase_abs_err = 0.0;
};

MbAnalysis analyze_output(const SpaceTimeField& f, const MbConfig& cfg,
                          const PulseSpec& pulse1, const PulseSpec& pulse2);

}  // namespace tripod
