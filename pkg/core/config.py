import os
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Output
    socm_output_dir: str = os.getenv("SOCM_OUTPUT_DIR", "./output")

    # Parallelism
    socm_workers: int = int(os.getenv("SOCM_WORKERS", str(os.cpu_count() or 1)))
    socm_chunk_size: int = int(os.getenv("SOCM_CHUNK_SIZE", "1008"))
    socm_torch_threads: int = int(os.getenv("SOCM_TORCH_THREADS", "1"))

    # Reproducibility
    socm_seed: int = int(os.getenv("SOCM_SEED", "0"))

    # Verification
    socm_verify_samples: int = int(os.getenv("SOCM_VERIFY_SAMPLES", "10"))

    # Numerics
    socm_eigen_tol: float = float(os.getenv("SOCM_EIGEN_TOL", "1e-9"))

    # Logging
    socm_log_level: str = os.getenv("SOCM_LOG_LEVEL", "INFO")

    class Config:
        env_file = ".env"
        extra = "ignore"


settings = Settings()
