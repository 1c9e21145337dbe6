from setuptools import setup, find_packages


setup(
    name="tep-pebbling-lab",
    version="1.0.0",
    description="Laboratorio de verificacao para o Tree Evaluation Problem com jogos de pebbling",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "pyyaml>=6.0",
        "networkx>=2.8",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0",
            "pytest-cov>=4.0",
            "hypothesis>=6.0",
            "mypy>=0.990",
            "flake8>=6.0",
            "black>=22.0",
            "isort>=5.10",
            "pre-commit>=2.20",
        ],
    },
    entry_points={
        "console_scripts": [
            "tep-lab=tep_lab.cli:main",
        ],
    },
    python_requires=">=3.10",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
)
