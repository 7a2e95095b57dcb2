import logging
import sys
from logging.handlers import RotatingFileHandler

from core.config import settings

FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


# Configuración básica
def setup_logger(name: str) -> logging.Logger:
    logger = logging.getLogger(name)
    logger.setLevel(settings.LOG_LEVEL)

    # Evitar handlers duplicados si el módulo se importa varias veces
    if logger.handlers:
        return logger

    # Formato del log
    formatter = logging.Formatter(FORMAT)

    # Handler para archivo
    if settings.LOG_TO_FILE:
        log_dir = settings.get_log_dir()
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            log_dir / "analyzer.log",
            maxBytes=10485760,  # 10MB
            backupCount=5,
            encoding="utf-8",
        )
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    # Handler para consola (stderr: stdout queda para los informes)
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)
    logger.propagate = False

    return logger
