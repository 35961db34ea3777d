from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="equilib",
    version="1.0.0",
    author="equilib Team",
    description="Chemical equilibrium, activity-quotient error regimes, reaction paths and cell potentials",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Chemistry",
    ],
    python_requires=">=3.8",
    install_requires=[
        "click>=8.0.0",
        "PyYAML>=6.0",
        "rich>=10.0.0",
        "tqdm>=4.60.0",
        "pandas>=1.3.0",
        "numpy>=1.21.0",
        "scipy>=1.7.0",
    ],
    extras_require={
        "dev": ["pytest>=6.0.0", "black>=21.0", "flake8>=3.9.0", "mypy>=0.900"],
    },
    entry_points={
        "console_scripts": [
            "equilib=equilib.cli.commands:cli",
        ],
    },
)
