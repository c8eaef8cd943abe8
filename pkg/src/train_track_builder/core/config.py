import json
import os
from dataclasses import dataclass

STORE_ENV_VAR = "TRAIN_TRACK_STORE"


class Verdict:
    """Constants for decision verdicts."""

    YES = "YES"
    NO = "NO"
    BUDGET = "BUDGET"


@dataclass
class Config:
    """Toolkit configuration with JSON persistence."""

    CONFIG_FILE: str = "config.json"
    LOG_FILE: str = "train_tracks.log"
    STORE_PATH: str = "ct_store.db"
    HISTORY_FILE: str = "history.json"

    DEBUG_MODE: bool = False
    QUIET_MODE: bool = False
    SAVE_HISTORY: bool = False

    # Search limits
    BUDGET: int = 10**6
    DEPTH: int = 12
    MAX_RTT_ITERATIONS: int = 200
    MAX_RESTARTS: int = 0  # 0 means 2n
    INP_SEARCH_MAX_LENGTH: int = 64
    REDUCTION_CIRCUIT_LENGTH: int = 4
    RAY_COMPARE_WINDOW: int = 24
    FIXED_POINT_MAX_STEPS: int = 400
    SPLIT_CHECK_ITERATES: int = 3
    ROTATIONLESS_MAX_EXPONENT: int = 720
    PF_PRECISION: float = 1e-12

    # Corpus runs
    SEED: int = 0
    CORPUS_SIZE: int = 50
    CORPUS_MAX_RANK: int = 3
    CORPUS_WORD_LENGTH: int = 3

    def restarts_for(self, rank: int) -> int:
        """Restart cap for the CT pipeline at the given rank."""
        return self.MAX_RESTARTS if self.MAX_RESTARTS > 0 else 2 * rank

    @classmethod
    def load(cls, filepath: str = "config.json") -> "Config":
        """Load configuration from a JSON file, keeping defaults on failure."""
        cfg = cls()
        if os.path.exists(filepath):
            try:
                with open(filepath, "r", encoding="utf-8") as f:
                    data = json.load(f)
                mapping = {
                    "log_file": "LOG_FILE",
                    "store_path": "STORE_PATH",
                    "history_file": "HISTORY_FILE",
                    "debug_mode": "DEBUG_MODE",
                    "quiet_mode": "QUIET_MODE",
                    "save_history": "SAVE_HISTORY",
                    "budget": "BUDGET",
                    "depth": "DEPTH",
                    "max_rtt_iterations": "MAX_RTT_ITERATIONS",
                    "max_restarts": "MAX_RESTARTS",
                    "inp_search_max_length": "INP_SEARCH_MAX_LENGTH",
                    "reduction_circuit_length": "REDUCTION_CIRCUIT_LENGTH",
                    "ray_compare_window": "RAY_COMPARE_WINDOW",
                    "fixed_point_max_steps": "FIXED_POINT_MAX_STEPS",
                    "split_check_iterates": "SPLIT_CHECK_ITERATES",
                    "rotationless_max_exponent": "ROTATIONLESS_MAX_EXPONENT",
                    "pf_precision": "PF_PRECISION",
                    "seed": "SEED",
                    "corpus_size": "CORPUS_SIZE",
                    "corpus_max_rank": "CORPUS_MAX_RANK",
                    "corpus_word_length": "CORPUS_WORD_LENGTH",
                }
                for json_key, attr in mapping.items():
                    if json_key in data:
                        setattr(cfg, attr, data[json_key])
                cfg.CONFIG_FILE = filepath
            except Exception:
                pass  # defaults stay in place
        env_store = os.environ.get(STORE_ENV_VAR)
        if env_store:
            cfg.STORE_PATH = env_store
        return cfg


_active: Config | None = None


def get_config() -> Config:
    """Process-wide configuration used by library calls that take no explicit limits."""
    global _active
    if _active is None:
        _active = Config()
    return _active


def set_config(cfg: Config) -> None:
    global _active
    _active = cfg
