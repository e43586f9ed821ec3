"""
Logging configuration for the capsim command line.

Import this module at the top of any entry point so logging is configured
before a simulation runs. Logs go to stderr; stdout is reserved for verdicts
and summaries.
"""
import logging
import sys

from utils.config import settings

logging.basicConfig(
    level=getattr(logging, settings.log_level.upper(), logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    stream=sys.stderr,
    force=True,  # Override any existing configuration
)

logger = logging.getLogger(__name__)
logger.debug("capsim logging configuration initialized")
