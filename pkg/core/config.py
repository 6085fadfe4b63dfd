"""
Application configuration and settings
"""

import os


class Settings:
    """Application settings and numerical defaults"""

    def __init__(self):
        # Server configuration
        self.API_TITLE = "Lorentz Dispersion API"
        self.API_DESCRIPTION = (
            "Numerical dispersion analysis of FD and DG schemes for Maxwell-Lorentz media"
        )
        self.API_VERSION = "1.0.0"

        # Default medium: low-loss Lorentz medium
        self.DEFAULT_EPS_S = 5.25
        self.DEFAULT_EPS_INF = 2.25
        self.DEFAULT_GAMMA_HAT = 0.01
        self.DEFAULT_OMEGA_1 = 1.0

        # Figure recipes run at this fraction of the CFL limit
        self.CFL_FRACTION = 0.7

        # Solver tolerances
        self.ROOT_TOLERANCE = 1e-13
        self.POLE_RADIUS = 1e-14
        self.TAN_POLE_RADIUS = 1e-12
        self.EXTRACTION_CONDITION_LIMIT = 1e12

        # Physical-mode continuation over mesh scales 2^-j
        self.CONTINUATION_TARGET = 0.05
        self.CONTINUATION_MIN_LEVELS = 2
        self.CONTINUATION_MAX_LEVELS = 30

        # DG CFL bisection
        self.CFL_SAMPLES = 1024
        self.CFL_BISECTION_TOL = 1e-6
        self.CFL_SPECTRAL_SLACK = 1e-12

        # Forward step used for group velocities
        self.GROUP_VELOCITY_STEP = 1e-3

        # Execution
        self.PARALLEL_WORKERS = int(os.environ.get("DISPERSION_WORKERS", "1"))
        self.OUTPUT_DIR = os.path.abspath(os.environ.get("DISPERSION_OUTPUT_DIR", "results"))
        self.LOG_LEVEL = os.environ.get("DISPERSION_LOG_LEVEL", "INFO").upper()

        # CORS Configuration
        self.CORS_ORIGINS = ["*"]
        self.CORS_CREDENTIALS = True
        self.CORS_METHODS = ["*"]
        self.CORS_HEADERS = ["*"]

    def update_output_dir(self, new_dir: str) -> None:
        """Update output directory"""
        self.OUTPUT_DIR = os.path.abspath(new_dir)


# Global settings instance
settings = Settings()


def get_settings() -> Settings:
    """Get settings instance"""
    return settings
