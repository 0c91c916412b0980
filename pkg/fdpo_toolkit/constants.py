"""
    Default values for all solver limits and experiment grids.
    Can be overwritten via Django settings, see: fdpo_toolkit.app_settings
"""

POLICY_ITERATION_MAX_SWEEPS = 10_000
VALUE_ITERATION_MAX_BACKUPS = 1_000_000
STATIONARY_HORIZON = 1000
ENUMERATION_LIMIT = 1_000_000
DEFAULT_DELTA = 0.1
DEFAULT_JOBS = 1

# Values are compared with this slack in greedy steps, the lowest action index wins a tie:
TIE_TOLERANCE = 1e-12

# Probability rows must sum to one within:
PROBABILITY_ATOL = 1e-12

# Exploration sweep: behavior is epsilon-greedy around the optimal policy
EPSILON_GRID = (0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0)

# Dataset size sweep (behavior epsilon=0.5)
SIZE_GRID = (1, 10, 100, 1000, 2000, 10_000, 100_000, 200_000)
SIZE_SWEEP_EPSILON = 0.5
EXPLORATION_SWEEP_SIZE = 2000

# Gridworld
GRID_WIDTH = 8
GRID_HEIGHT = 8
GRID_SLIP = 0.2
GRID_DISCOUNT = 0.99
GRID_BETA_A = 3.0
GRID_BETA_B = 1.0

# Bandit demo
BANDIT_ARMS = 1000
BANDIT_BEST_MEAN = 0.99
BANDIT_OTHER_MEAN = 0.01
BANDIT_BEST_PULLS = 10_000
BANDIT_OTHER_PULLS = 1

# Proximal sup-term / oracle grid resolution
SIMPLEX_GRID_RESOLUTION = 1e-2

CSV_FLOAT_FORMAT = '.17g'
