#ifndef BOSEGAS_MEANFIELD_HPP
#define BOSEGAS_MEANFIELD_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/grid.hpp"

namespace bosegas {

// Stationary mean-field problem: external potential = optional harmonic trap
// about the box center plus an optional site-sampled disorder field. The trap
// is kept separate so the energy split (and the virial check) is exact.
struct GpeProblem {
    Grid grid;
    std::vector<double> disorder;   // empty means none
    double trap_frequency = 0.0;    // 0 means no trap
    double hbar = 1.0;
    double mass = 1.0;
    double coupling = 0.0;          // g >= 0
    double particle_count = 1.0;    // wavefunction normalized to N

    void validate() const;
    // Site value of the full external potential.
    double external(std::size_t flat) const;
    std::vector<double> external_field() const;
};

struct FlowOptions {
    double tol = 1e-9;        // residual <= tol * (hbar^2 / 2 m h^2), energy drift <= tol relative
    int max_iter = 200000;
    int check_every = 20;
    double dt_safety = 0.4;
    double floor_energy_slack = 1e-13;
    // Independent descent runs from perturbed starts; > 1 reports the energy
    // spread across them instead of claiming a global optimum.
    int starts = 1;
};

struct GroundState {
    Field psi;                 // sum psi^2 h^d = N
    double energy = 0.0;
    double chemical_potential = 0.0;
    double kinetic = 0.0;
    double trap_energy = 0.0;
    double disorder_energy = 0.0;
    double interaction = 0.0;
    double residual = 0.0;     // ||H_gp psi - mu psi|| per sqrt(N), energy units
    int iterations = 0;
    int starts = 1;
    double energy_spread = 0.0; // max - min over multi-start energies
    Warnings warnings;
};

struct GpeNoConvergence : NoConvergence {
    GroundState best;
    GpeNoConvergence(const std::string& msg, GroundState b)
        : NoConvergence(msg), best(std::move(b)) {}
};

// Imaginary-time gradient flow with backtracking step control. The energy is
// non-increasing across accepted steps; mu satisfies
//   mu N = E_kin + E_trap + E_dis + 2 E_int
// at the returned state to within the residual.
GroundState solve_ground_state(const GpeProblem& problem, const FlowOptions& options = {});

struct ThomasFermi {
    Field density;       // max(0, (mu - V_ext) / g), integrates to N
    double mu = 0.0;     // fixed by the normalization solve on the lattice
    double radius = 0.0; // closed-form trap radius
};

// Interaction-dominated profile; needs both repulsion and a trap. The closed
// form radius at d=3 is (4.5 N a l^4)^{1/5} with a = m g / (4 pi hbar^2);
// lower dimensions use the exact normalization constant of the parabolic
// profile.
ThomasFermi thomas_fermi_profile(const GpeProblem& problem);

struct Observables {
    double norm = 0.0;            // integral of psi^2
    double chemical_potential = 0.0;
    double energy = 0.0;
    double kinetic = 0.0;
    double trap_energy = 0.0;
    double disorder_energy = 0.0;
    double interaction = 0.0;
    double peak_density = 0.0;
    std::array<double, 3> width = {0.0, 0.0, 0.0};       // real-space std per axis
    std::array<double, 3> momentum_spread = {0.0, 0.0, 0.0};
    double momentum_spread_rms = 0.0;
    double parseval_residual = 0.0;                      // plancherel mismatch, relative
};

// All quadratures use the solver's stencil, so the chemical potential matches
// solve_ground_state on converged input.
Observables observables(const Field& psi, const GpeProblem& problem);

// Energy of a configuration (diagnostic; same discretization as the solver).
double gpe_energy(const GpeProblem& problem, const Field& psi);

} // namespace bosegas

#endif
