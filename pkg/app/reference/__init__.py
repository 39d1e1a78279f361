# ABOUTME: Certified reference solutions and global-error curves
# ABOUTME: Exact flows where known, step-halving RK4 otherwise
