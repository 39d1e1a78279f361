# ABOUTME: Fixed-step explicit Runge-Kutta methods producing dense trajectories
# ABOUTME: Euler (order 1), explicit midpoint (order 2) and classical RK4 (order 4)
