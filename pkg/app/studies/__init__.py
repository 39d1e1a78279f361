# ABOUTME: End-to-end experiments: convergence order, empirical bound constant K, regimes
# ABOUTME: StudyRunner coordinates integrators, references and conditioning curves
