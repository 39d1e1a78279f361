# ABOUTME: Variational equation along trajectories: per-step transition matrices
# ABOUTME: Overflow-safe products Phi(t_n, t_j) and operator norms
