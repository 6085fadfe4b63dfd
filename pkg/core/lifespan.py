"""
Application lifespan management
Handles cache warm-up and shutdown of the sweep executor
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from contextlib import asynccontextmanager
from fastapi import FastAPI

from core.config import get_settings
from core.dependencies import (
    get_default_medium,
    get_sweep_executor,
    record_warm_cache,
    set_sweep_executor,
)
from dispersion.dg import assemble_local
from dispersion.fd import lambda_coeffs

logger = logging.getLogger(__name__)

WARM_FD_ORDERS = range(1, 11)
WARM_DG_DEGREES = range(0, 4)


def initialize_services() -> None:
    """Warm the stencil and local-matrix caches and start the sweep executor"""
    settings = get_settings()

    logger.info(f"Dispersion service starting - output directory: {settings.OUTPUT_DIR}")

    try:
        for M in WARM_FD_ORDERS:
            lambda_coeffs(M)
        record_warm_cache("fd_stencils", len(WARM_FD_ORDERS))
        logger.info("✅ FD stencil cache initialized")

        for p in WARM_DG_DEGREES:
            assemble_local(p)
        record_warm_cache("dg_local_matrices", len(WARM_DG_DEGREES))
        logger.info("✅ DG local matrix cache initialized")

        medium = get_default_medium()
        logger.info(
            f"✅ Default medium initialized (eps_s={medium.eps_s}, eps_inf={medium.eps_inf}, "
            f"gamma_hat={medium.gamma_hat})"
        )

        if settings.PARALLEL_WORKERS > 1 and get_sweep_executor() is None:
            set_sweep_executor(ProcessPoolExecutor(max_workers=settings.PARALLEL_WORKERS))
            logger.info(f"✅ Sweep executor initialized ({settings.PARALLEL_WORKERS} workers)")

        logger.info("🚀 All services initialized successfully")

    except Exception as e:
        logger.error(f"❌ Failed to initialize services: {e}")
        raise


def shutdown_services() -> None:
    """Shutdown all application services"""
    logger.info("🛑 Dispersion service shutting down...")
    executor = get_sweep_executor()
    if executor is not None:
        executor.shutdown(wait=True)
        set_sweep_executor(None)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Application lifespan context manager

    Handles initialization on startup and cleanup on shutdown
    """
    # Startup
    initialize_services()

    yield

    # Shutdown
    shutdown_services()
