# ABOUTME: Conditioning function E(t) of a solution and its growth classification
# ABOUTME: E(t) integrates ||Phi(t, s)|| over s in [t0, t]
