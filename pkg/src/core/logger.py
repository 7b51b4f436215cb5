import sys

from loguru import logger

from core.settings import settings

DOMAIN_LEVELS = {
    "PROFILE": ("<light-black>", 11),
    "MEASURE": ("<light-blue>", 12),
    "BOUNDS": ("<green>", 13),
    "ORACLE": ("<light-yellow>", 14),
    "TABLE": ("<light-white>", 15),
}


def register_levels():
    for name, (color, number) in DOMAIN_LEVELS.items():
        try:
            logger.level(name)
        except ValueError:
            logger.level(name, no=number, color=color)


def setup_logger(level: str | None = None):
    logger.remove()
    register_levels()

    logger.add(
        sys.stderr,
        level=level or settings.app_log_level,
        format="<light-black>{time:YYYY-MM-DD at HH:mm:ss}</light-black> | "
        "<level>{level: <8}</level> | "
        "<cyan>{message}</cyan>",
        backtrace=settings.app_debug,
        diagnose=settings.app_debug,
    )
