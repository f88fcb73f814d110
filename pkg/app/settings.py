import os
from dotenv import load_dotenv

load_dotenv()

class Settings:
    def __init__(self):
        # Execution settings (never change simulation results)
        self.workers = int(os.getenv("TUBESWARM_WORKERS", "1"))
        self.log_level = os.getenv("TUBESWARM_LOG_LEVEL", "INFO")

        # Output settings
        self.output_dir = os.getenv("TUBESWARM_OUTPUT_DIR", "runs")
        self.lyapunov_every = int(os.getenv("TUBESWARM_LYAPUNOV_EVERY", "10"))

settings = Settings()
