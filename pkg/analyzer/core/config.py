from pathlib import Path
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    PROJECT_NAME: str = "Linear Loop Constant-Runtime Analyzer"

    # Logging
    LOG_DIR: str = "logs"
    LOG_LEVEL: str = "INFO"
    LOG_TO_FILE: bool = True

    # Límites de recursos (Fourier-Motzkin y desenrollado)
    FM_MAX_CONJUNCTS: int = 200_000
    LINSAT_MAX_CONJUNCTS: int = 200_000
    MAX_UNROLL: int = 10_000
    ORACLE_MAX_UNROLL: int = 200
    FORMULA_BOUND_MAX_M: int = 64

    # CLI
    SIMULATE_STEPS: int = 100
    BATCH_JOBS: int = 1
    LOOP_FILE_SUFFIX: str = ".loop"

    # Variable fresca para homogeneizar x <- Ax + b
    HOMOGENIZING_VAR: str = "z"

    # Método para obtener paths absolutos
    def get_log_dir(self) -> Path:
        return Path(self.LOG_DIR).resolve()

    def get_corpus_dir(self) -> Path:
        return Path(__file__).parent.parent.parent / "corpus"

    class Config:
        case_sensitive = True
        env_file = ".env"
        env_file_encoding = "utf-8"

settings = Settings()
