#pragma once

// Pseudospectral time integration of the momentum-density equation
//   m_t + u m_x + b m u_x = 0,   m = u - u_xx,
// on one period, optionally in the frame moving with the wave speed c where
// the traveling wave is a steady state:
//   m_t = (c - u) m_x - b m u_x.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bch/error.hpp"
#include "bch/fourier.hpp"
#include "bch/profile.hpp"

namespace bch {

struct EvolutionState {
  double t = 0.0;
  double T = 0.0;
  double dx = 0.0;
  std::vector<double> m;
  std::vector<double> u;
};

/// u = (1 - d^2)^{-1} m via the Fourier symbol 1/(1 + k^2).
std::vector<double> reconstruct_velocity(std::span<const double> m, double period);

enum class Frame { Traveling, Lab };

/// Owns the FFT plans and scratch for one grid; one instance per thread.
class Evolver {
 public:
  /// frame_speed is c in the traveling frame and 0 in the lab frame.
  Evolver(std::size_t N, double period, double b, double frame_speed);
  ~Evolver();
  Evolver(Evolver&&) noexcept;
  Evolver& operator=(Evolver&&) noexcept;

  [[nodiscard]] std::size_t size() const noexcept;
  [[nodiscard]] double period() const noexcept;

  /// Right-hand side with 2/3-rule dealiasing of the products.
  void rhs(std::span<const double> m, std::span<double> out);

  /// One RK4 step. Throws PositivityLost if min m <= 0 afterwards and BlowUp
  /// if max |m| exceeds 1e6. Refreshes state.u.
  void step(EvolutionState& state, double dt);

  /// Largest stable step 0.5 dx / max|u - c| for the given state.
  [[nodiscard]] double cfl_bound(const EvolutionState& state) const;

  [[nodiscard]] EvolutionState make_state(std::vector<double> m) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Conserved quantities int m, int m^(1/b), int (m_x^2/(b^2 m^2) + 1) m^(-1/b).
struct ConservedValues {
  double E = 0.0;
  double F1 = 0.0;
  double F2 = 0.0;
};
ConservedValues conserved_values(std::span<const double> m, double period, double b);

struct OrbitalDistance {
  double rho = 0.0;
  double x0 = 0.0;  ///< minimizing shift: m is closest to mu(. - x0)
};

/// inf over shifts of ||m - mu(. - x0)||_{H^1}; cross-correlation seed plus
/// golden-section refinement.
OrbitalDistance orbital_distance(std::span<const double> m, std::span<const double> mu,
                                 double period);

/// ||m - mu(. - x0)||_{H^1} at one shift (direct, cancellation-free).
double shifted_h1_distance(std::span<const double> m, std::span<const double> mu, double period,
                           double x0);

double h1_norm(std::span<const double> v, double period);

enum class PerturbationMode { Raw, Constrained };

struct PerturbationSpec {
  double eps = 0.0;  ///< H^1 norm of the perturbation
  PerturbationMode mode = PerturbationMode::Raw;
  std::uint64_t seed = 2024;
  std::size_t modes = 8;  ///< highest Fourier mode of the random perturbation
};

/// Random smooth v with ||v||_{H^1} = eps; in Constrained mode v is first
/// made L2-orthogonal to dF1/dm(mu) and dF2/dm(mu).
std::vector<double> make_perturbation(const WaveProfile& profile, const PerturbationSpec& spec);

struct ExperimentConfig {
  PerturbationSpec perturbation{};
  double horizon_periods = 50.0;
  double dt_safety = 0.5;  ///< dt = dt_safety * 0.5 dx / max|u - c| at t = 0
  Frame frame = Frame::Traveling;
  std::size_t samples_per_period = 8;
};

struct RunDiagnostics {
  std::vector<double> times;
  std::vector<double> E_drift;
  std::vector<double> F1_drift;
  std::vector<double> F2_drift;
  std::vector<double> rho;
  double max_rho = 0.0;
  double eps = 0.0;
  double ratio = 0.0;  ///< max_rho / eps (0 when eps = 0)
  double max_E_drift = 0.0;
  double max_F1_drift = 0.0;
  double max_F2_drift = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  double initial_rho = 0.0;
  /// Set when the run stopped early (PositivityLost or BlowUp); the series
  /// hold everything up to the failure.
  std::optional<ErrorKind> aborted;
  std::string abort_message;
  std::vector<double> final_m;
};

/// The grid is the profile's; m0 = mu + v must stay positive.
RunDiagnostics run_experiment(const WaveProfile& profile, const ExperimentConfig& config);

}  // namespace bch
