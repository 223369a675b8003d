import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

load_dotenv()


def _env_bool(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class Settings:
    guess_limit: int
    isolated_bound: int
    degree_cap: int
    genericity_retries: int
    max_pairs: int
    groebner_method: str
    jobs: int
    log_level: str
    log_json: bool
    api_host: str
    api_port: int


def load_settings() -> Settings:
    """Read settings from the environment (and a local .env file, if any)"""
    return Settings(
        guess_limit=int(os.getenv('DARBOUX_GUESS_LIMIT', '16')),
        isolated_bound=int(os.getenv('DARBOUX_ISOLATED_BOUND', '4')),
        degree_cap=int(os.getenv('DARBOUX_DEGREE_CAP', '7')),
        genericity_retries=int(os.getenv('DARBOUX_GENERICITY_RETRIES', '20')),
        max_pairs=int(os.getenv('DARBOUX_MAX_PAIRS', '200000')),
        groebner_method=os.getenv('DARBOUX_GROEBNER_METHOD', 'buchberger'),
        jobs=int(os.getenv('DARBOUX_JOBS', '1')),
        log_level=os.getenv('DARBOUX_LOG_LEVEL', 'INFO'),
        log_json=_env_bool('DARBOUX_LOG_JSON'),
        api_host=os.getenv('DARBOUX_API_HOST', '0.0.0.0'),
        api_port=int(os.getenv('DARBOUX_API_PORT', '8000')),
    )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
