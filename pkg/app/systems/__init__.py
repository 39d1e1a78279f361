# ABOUTME: ODE right-hand-side abstraction and the built-in benchmark suite
# ABOUTME: Covers fixed points, cycles, invariant tori and contrast cases
