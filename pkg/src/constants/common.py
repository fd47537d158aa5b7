from dotmap import DotMap

EXIT_CODES = DotMap(
    {
        "SECURE": 0,
        "ERROR": 1,
        "INSECURE_OR_ABORTED": 2,
    },
    _dynamic=False,
)

# Truncated tail mass allowed for any photon-number distribution
TRUNCATION_TOLERANCE = 1e-9

# Above this photon number the Poisson pmf is evaluated in log space
LOG_SPACE_THRESHOLD = 20

# Source index inside Tally arrays
SIGNAL, DECOY = 0, 1
SOURCE_NAMES = ("signal", "decoy")

RATIO_METHODS = ["auto", "poisson_pair", "general", "near_single"]
SWEEP_PARAMS = ["eta", "mu", "mu_prime", "epsilon"]

VERDICTS = DotMap({"SECURE": "secure", "INSECURE": "insecure"}, _dynamic=False)
MODES = DotMap({"ANALYTIC": "analytic", "EMPIRICAL": "empirical"}, _dynamic=False)

REPORT_KEYS = ["config", "tally", "yields", "aborted", "security", "timing"]
SECURITY_KEYS = [
    "y_s",
    "y_d",
    "ratio_bound",
    "y_s_multi_upper",
    "condition_lhs",
    "condition_rhs",
    "verdict",
    "normal_op_margin",
    "mode",
    "z",
    "margin",
]
SWEEP_CSV_HEADER = [
    "param",
    "value",
    "y_s",
    "y_d",
    "ratio_bound",
    "condition_lhs",
    "condition_rhs",
    "margin",
    "verdict",
]
