import logging
import os

from dotenv import dotenv_values

logger = logging.getLogger(__name__)


def load_app_dotenv(*files: str, prefix: str, override: bool = False) -> dict[str, str]:
    """Export the prefixed keys of the given .env files (QUIETWIN_CONFIG, QUIETWIN_WORKERS)."""
    env: dict[str, str] = {}
    for file in files:
        values = dotenv_values(file)
        env.update({k: v for k, v in values.items() if v is not None and k.startswith(prefix)})

    if override:
        os.environ.update(env)
    else:
        for key, value in env.items():
            os.environ.setdefault(key, value)

    logger.debug("Loaded %d %s* variable(s) from dotenv files", len(env), prefix)
    return env
