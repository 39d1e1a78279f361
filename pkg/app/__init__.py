# ABOUTME: Conditioning of ODE solutions and global error of one-step integrators
# ABOUTME: Contains systems, integrators, variational, conditioning, reference, studies and CLI modules
