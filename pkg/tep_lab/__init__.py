"""tep-pebbling-lab: laboratorio de verificacao para o Tree Evaluation Problem."""

__version__ = "1.0.0"
__version_info__ = (1, 0, 0)
