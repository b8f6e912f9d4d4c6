"""
Analysis helpers that run on benchmark outputs or noise models.
"""

from typing import List, Optional

from loguru import logger


def run_analysis(analysis_name: str, args: Optional[List[str]] = None, debug: bool = False) -> None:
    """
    Run a specific analysis by name.

    Args:
        analysis_name: Name of the module under ``noisebench.analysis``
        args: Additional arguments for the analysis
        debug: Whether to log full tracebacks
    """
    try:
        module_name = f"noisebench.analysis.{analysis_name}"
        module = __import__(module_name, fromlist=["run"])
    except ImportError as e:
        logger.error(f"Could not find analysis module: {analysis_name}")
        if debug:
            logger.exception(e)
        raise

    if not hasattr(module, "run"):
        logger.error(f"Analysis module {analysis_name} does not have a 'run' function")
        raise AttributeError(f"noisebench.analysis.{analysis_name} has no 'run' function")

    try:
        module.run(*(args or []))
    except (AttributeError, TypeError) as e:
        logger.error(f"Error running analysis {analysis_name}: {e}")
        if debug:
            logger.exception(e)
        raise
