
from setuptools import setup

version = '0.1.0'


# Read the long description from README.md
with open('README.md') as f:
    long_description = f.read()


setup(
    name='quadfeatures',
    version=version,
    description='Deterministic quadrature feature maps for shift-invariant kernels',
    long_description=long_description,
    long_description_content_type="text/markdown",
    author='The quadfeatures authors',
    license='BSD',
    packages=['quadfeatures'],
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.7',
    ],
    entry_points={
        'console_scripts': [
            'quadfeatures = quadfeatures.cli:main',
        ],
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Topic :: Scientific/Engineering :: Mathematics'
    ]
)
