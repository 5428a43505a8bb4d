"""
Main entry point for HoloSim command-line runs
Usage: python app.py <subcommand> [options]
"""
import sys
import logging

from holosim.cli import run_command
from holosim.config import config

# Set up logging
logging.basicConfig(level=config.LOG_LEVEL)
logger = logging.getLogger(__name__)

def main():
    """Run one CLI subcommand and exit with its status"""
    logger.info(f"{config.APP_NAME} {config.VERSION}")
    sys.exit(run_command(sys.argv[1:]))

if __name__ == "__main__":
    main()
