import os
import json
import logging
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Always build absolute path so it works regardless of current working directory
CONFIG_DIR = os.path.dirname(os.path.abspath(__file__))
CONFIG_FILE = os.path.join(CONFIG_DIR, "config.json")

# Verification worker cap
ANF_TDEPTH_THREADS = max(1, int(os.getenv('ANF_TDEPTH_THREADS', str(os.cpu_count() or 1))))
ANF_TDEPTH_LOG_LEVEL = os.getenv('ANF_TDEPTH_LOG_LEVEL', 'INFO').upper()

VARIANTS = ("tdepth1", "logical-and")

DEFAULTS = {
    "default_variant": "tdepth1",
    "verify_max_inputs": 20,
    "statevector_max_qubits": 14,
    "amplitude_tolerance": 1e-10,
    "random_pairs": 16,
    "random_seed": 2025,
    "truth_table_soft_limit": 24,
}


class Config:
    def __init__(self, config_file: str = CONFIG_FILE):
        self.config_file = config_file
        self.load_config()

    def load_config(self):
        """Load configuration from file or create default"""
        if os.path.exists(self.config_file):
            try:
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    self.config = {**DEFAULTS, **json.load(f)}
            except (OSError, ValueError):
                self.create_default_config()
        else:
            self.create_default_config()

    def create_default_config(self):
        """Create default configuration"""
        self.config = dict(DEFAULTS)
        try:
            self.save_config()
        except OSError:
            # read-only checkout: keep the in-memory defaults
            pass

    def save_config(self):
        """Save configuration to file"""
        os.makedirs(os.path.dirname(self.config_file), exist_ok=True)
        with open(self.config_file, 'w', encoding='utf-8') as f:
            json.dump(self.config, f, indent=4)

    def get(self, key, default=None):
        """Get configuration value"""
        return self.config.get(key, default)

    def set(self, key, value):
        """Set configuration value"""
        self.config[key] = value
        self.save_config()

    def validate_variant(self, variant):
        """Validate a Toffoli decomposition variant name"""
        if variant not in VARIANTS:
            return False, f"Unknown variant '{variant}', expected one of {', '.join(VARIANTS)}"
        return True, "Variant is valid"


def configure_logging(level: str = ANF_TDEPTH_LOG_LEVEL):
    """Install one stream handler for the toolkit loggers"""
    root = logging.getLogger()
    if not any(getattr(h, "_anf_tdepth", False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        handler._anf_tdepth = True
        root.addHandler(handler)
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))


# Global configuration instance
config = Config()
