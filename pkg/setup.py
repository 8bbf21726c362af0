from pathlib import Path

from setuptools import find_packages, setup

# Read the contents of README.md
this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text(encoding='utf-8')

# Entry points
entry_points = {
    "console_scripts": [
        "latticefactor=latticefactor.__main__:main",
    ],
}

setup(
    name="latticefactor",
    version="0.1.0",
    author="Your Name",
    author_email="your.email@example.com",
    description="Möbius functions, characteristic polynomials and their factorization through atomic transversals",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="https://github.com/yourusername/latticefactor",
    package_dir={"": "src"},
    packages=find_packages(where="src"),
    python_requires=">=3.8",
    install_requires=[
        'numpy>=1.24.0',
        'pydantic>=2.0.0,<3.0.0',
        'click>=8.1.0',
        'sympy>=1.11',
        'networkx>=3.0',
    ],
    entry_points=entry_points,
    include_package_data=True,
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    keywords="poset lattice mobius characteristic-polynomial chromatic-polynomial",
    project_urls={
        "Bug Reports": "https://github.com/yourusername/latticefactor/issues",
        "Source": "https://github.com/yourusername/latticefactor",
    },
)
