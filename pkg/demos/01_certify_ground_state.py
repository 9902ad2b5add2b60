"""Certify ground-state preparations of a small frustration-free Hamiltonian.

Walks the full verifier loop: pick thresholds, derive the Hoeffding shot
count, measure every local term on copies of the preparation, convert the
energy estimate into a fidelity lower bound and issue a verdict.  Preparations
of decreasing quality show the accept / indeterminate / reject regions.
"""
import numpy as np

import ffcert as fc

# Four commuting projectors on three qubits: ground state |000>, gap 1, norm 4.
P1 = np.diag([0.0, 1.0]).astype(complex)
system = fc.SiteSystem(("q0", "q1", "q2"), (2, 2, 2))
terms = (
    fc.LocalTerm(("q0",), P1),
    fc.LocalTerm(("q1",), P1),
    fc.LocalTerm(("q2",), P1),
    fc.LocalTerm(("q0", "q1"), np.diag([0.0, 0.0, 0.0, 1.0]).astype(complex)),
)
ham = fc.LocalHamiltonian(system, terms)

summary = fc.analyze(ham)
print("=== Hamiltonian ===")
print(f"terms: {ham.n_terms}, J = {ham.interaction_strength}, "
      f"E0 = {summary.ground_energy:.2e}, gap = {summary.gap}, norm = {summary.norm}")
ff = fc.verify_frustration_free(ham, summary)
print(f"frustration-free: {ff.frustration_free} "
      f"(max term residual {max(ff.term_residuals):.1e})")

# Verifier parameters: threshold fidelity, failure probability, estimation error.
F_T, alpha, eps = 0.8, 0.1, 0.05
cert_plan = fc.plan_for(ham, summary, F_T, alpha, eps)
print("\n=== Plan ===")
print(f"F_T = {F_T}, alpha = {alpha}, eps = {eps}")
print(f"shots per term m = {cert_plan.shots_per_term}")
print(f"fidelity gap delta = {cert_plan.fidelity_gap:.4f} "
      f"(guaranteed accept above F_T + delta = {F_T + cert_plan.fidelity_gap:.4f})")

ground = fc.PreparedState.from_pure(summary.ground_vector())
print("\n=== Verdicts ===")
print(f"{'preparation':<28} {'true F':>8} {'region':>14} {'E*':>8} {'F*_min':>8} verdict")
for p in (0.0, 0.05, 0.2, 0.5, 0.9):
    rho = fc.apply_noise(ground, fc.NoiseSpec.depolarizing(p))
    report = fc.certify(ham, summary, rho, cert_plan, seed=int(1000 * p))
    region = fc.evaluate_protocol_regions(report.true_fidelity, cert_plan)
    print(f"{'depolarized p=' + format(p, '.2f'):<28} {report.true_fidelity:8.4f} "
          f"{region:>14} {report.e_star:8.4f} {report.f_min_star:8.4f} {report.verdict}")

print("\nAcceptance always certifies F > F_T; the indeterminate band gives no promise.")
