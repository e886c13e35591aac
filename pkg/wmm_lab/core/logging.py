"""Logging configuration for the library and CLI.

Configures a named logger (``wmm_lab``) writing to the console and, when
``WMM_LAB_LOG_FILE`` is set, to a local file.  Import ``logger`` from this module.
"""

import logging
import logging.config

from wmm_lab.core.settings import settings

handlers: dict[str, dict[str, str]] = {
    "console": {
        "class": "logging.StreamHandler",
        "formatter": "default",
        "stream": "ext://sys.stderr",
    },
}
if settings.app.log_file is not None:
    handlers["file"] = {
        "class": "logging.FileHandler",
        "formatter": "default",
        "filename": str(settings.app.log_file),
    }

config_dict = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "default": {
            "format": "%(asctime)s %(name)s %(levelname)s [%(module)s:%(funcName)s:%(lineno)d] %(message)s",
            "datefmt": "%Y-%m-%d %H:%M:%S",
        },
    },
    "handlers": handlers,
    "loggers": {
        "wmm_lab": {
            "level": settings.app.log_level,
            "handlers": list(handlers),
            "propagate": False,
        },
    },
}

logging.config.dictConfig(config_dict)
logger = logging.getLogger("wmm_lab")
