"""该模块集中管理配置。统一维护默认参数、数值容差与运行限制。"""
"""EN: This module centralizes configuration, including default parameters, numerical tolerances and runtime limits."""

from pathlib import Path

# 定义项目根目录，默认配置文件放在这里。
# EN: Project root; the default config file lives here.
ROOT_DIR = Path(__file__).resolve().parent.parent

# 定义应用标识与默认输出位置。
# EN: Define the app identity and default output locations.
APP_NAME = "DirichletResonance"
DEFAULT_CONFIG_PATH = ROOT_DIR / "scan.conf"
DEFAULT_OUT_PATH = Path("scan.jsonl")

# 定义 JSONL 记录版本。断点续跑只匹配同版本记录。
# EN: JSONL record schema version. Resume matching only accepts the same version.
SCHEMA_VERSION = 2

# 定义筛法上限。Y 取渐近公式原值时会远超内存，超过上限直接拒绝。
# EN: Sieve cap. The asymptotic Y would exceed memory, so limits above the cap are refused.
SIEVE_LIMIT_CAP = 10**8

# 定义 Euler-Maclaurin 参数。默认值保证 s >= 0.6 时余项不超过 1e-12。
# EN: Euler-Maclaurin parameters. Defaults keep the remainder below 1e-12 for s >= 0.6.
EM_CUTOFF_DEFAULT = 32
EM_CUTOFF_MIN = 10
EM_ORDER_DEFAULT = 10
EM_ORDER_MIN = 1
EM_ORDER_MAX = 15
SIGMA_DIAGNOSTIC_MAX = 3.0

# 定义分支延拓参数。|L| 低于阈值即视为零点附近，单步辐角变化必须小于 pi/4。
# EN: Branch continuation parameters. |L| below the guard means a near-zero; each step must turn the argument by less than pi/4.
ZERO_GUARD_DEFAULT = 1e-8
CONTINUATION_START = 2.0
CONTINUATION_MAX_ARG_STEP = 0.7853981633974483
CONTINUATION_INITIAL_STEPS = 8
CONTINUATION_MIN_STEP = 1e-9

# 定义截断参数。Y 默认取 min(渐近值, 10^7)。
# EN: Truncation parameters. Y defaults to min(asymptotic value, 10^7).
Y_CAP_DEFAULT = 10**7
Y_LOG_NUMERATOR = 100.0

# 定义常数模块默认值。epsilon 会被夹到 sigma - 1/2 以下。
# EN: Constants defaults. epsilon is clamped below sigma - 1/2.
EPSILON_DEFAULT = 0.01
A_AUTO_FACTOR = 0.99
PREDICTED_BOUND_MIN_Q = 17
LAMBDA_QUAD_TOL = 1e-13

# 定义软检查阈值。截断差异中位数超过该值时只告警。
# EN: Soft-check threshold. A truncation-gap median above this only warns.
DISCREPANCY_WARN_MEDIAN = 2.0

# 定义批量计算的分块大小。分块固定，结果与线程数无关。
# EN: Chunk size for batch reductions. Fixed chunks keep results independent of worker count.
REDUCTION_CHUNK = 4096
NAIVE_TRANSFORM_ROW_CHUNK = 256
# 共振子特征矩阵按素数列分块，每块最多这么多个复数元素。
# EN: The resonator character matrix is built in prime-column blocks of at most this many complex entries.
RESONATOR_BLOCK_ELEMENTS = 1 << 21

# 定义 DFT 路线选择。最大素因子超过该值时改用 chirp-z。
# EN: DFT route selection. Lengths with a prime factor above this use chirp-z.
SMOOTH_RADIX_LIMIT = 13

# 定义子命令限制。
# EN: Subcommand limits.
CHARS_MAX_Q = 2000
CONGRUENCE_ORACLE_MAX_N = 10**5
SCAN_TARGETS_DEFAULT = 0
WORKERS_DEFAULT = 1
SEED_DEFAULT = 20240601

# 定义退出码。
# EN: Exit codes.
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INVARIANT = 2
EXIT_IO = 3
