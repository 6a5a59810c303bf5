# -*- coding: utf-8 -*-
import sys

from setuptools import setup, find_packages

# Avoids IDE errors, but actual version is read from version.py
__version__ = ""
exec(open('chiraltalbot/version.py').read())

if sys.version_info < (3,):
    sys.exit('Sorry, Python3 is required.')

with open('README.md', 'r', encoding='utf-8') as f:
    readme = f.read()

setup(
    name='pychiraltalbot',
    version=__version__,
    description='chiraltalbot: Talbot-Lau interferometry of chiral molecules near chiral gratings',
    long_description=readme,
    long_description_content_type='text/markdown',
    author='XuMing',
    author_email='xuming624@qq.com',
    license='Apache License 2.0',
    zip_safe=False,
    python_requires='>=3.8.0',
    entry_points={"console_scripts": ["chiraltalbot = chiraltalbot.cli:main"]},
    classifiers=[
        'Intended Audience :: Science/Research',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Physics',
    ],
    keywords='talbot-lau,matter-wave,interferometry,casimir-polder,chirality,enantiomer',
    install_requires=[
        "numpy",
        "scipy",
        "loguru",
        "pydantic>=2",
        "python-dotenv",
    ],
    packages=find_packages(exclude=['tests']),
    package_dir={'chiraltalbot': 'chiraltalbot'},
    package_data={'chiraltalbot': ['*.*', 'presets/*.json']}
)
