"""
Startup script for the HoloSim HTTP service
"""
import sys
import logging

from holosim.config import config

# Set up logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

def start_api():
    """Start the FastAPI service under uvicorn"""
    try:
        import uvicorn
    except ImportError:
        logger.error("uvicorn is not installed; install requirements.txt")
        return 1

    logger.info(f"Starting {config.APP_NAME} API on {config.API_HOST}:{config.API_PORT}")
    try:
        uvicorn.run(
            "holosim.api.main:app",
            host=config.API_HOST,
            port=config.API_PORT,
            log_level=config.LOG_LEVEL.lower(),
            reload=config.DEBUG,
        )
    except KeyboardInterrupt:
        logger.info("Shutting down...")
    return 0

if __name__ == "__main__":
    sys.exit(start_api())
