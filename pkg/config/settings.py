# config/settings.py
#
# Site-specific settings for the round-robin arbiter toolkit. See
# config/parameters.md for a description of every value.

# logging; None keeps logging on the console (stderr) only
LOG_FILE_PATH = None

# SQLAlchemy database URL used to record simulation runs, e.g.
# "sqlite:///arbiter_runs.db". None disables the run history unless the
# `--db` flag is given.
DATABASE_URI = None

# arbiter defaults; six ports matches the reference six-device design
DEFAULT_NUM_PORTS = 6
DEFAULT_POLICY = "SKIPSCAN"
DEFAULT_TIME_SLICE = 1

# workload defaults
DEFAULT_CYCLES = 1000
DEFAULT_SEED = 0
SEED_ENV_VAR = "RR_ARBITER_SEED"
DEFAULT_BERNOULLI_P = 0.5
DEFAULT_BURST_LEN = 4
DEFAULT_IDLE_LEN = 4

# exhaustive verification limits
MAX_VERIFY_PORTS = 10
VERIFY_TRACE_COUNT = 1000
VERIFY_TRACE_LENGTH = 50

# gate depth sweep; the 4 to 12 device sweep of the synthesized design
DEFAULT_DEPTH_SWEEP = (4, 6, 8, 10, 12)

# python package holding the arbitration policy plugins
POLICY_PLUGIN_PACKAGE = "plugins.policies"
