from setuptools import setup, find_packages

with open('README.md', 'r') as fh:
    long_description = fh.read()

setup(
    name='pycylinder',
    version='0.1.0',
    author='pycylinder developers',
    description='Verification of independent linear statistics on the cylinder R x T and on Sigma_a x T.',
    long_description=long_description,
    long_description_content_type='text/markdown',
    packages=find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    classifiers=[
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Programming Language :: Python :: 3',
        'License :: OSI Approved',
        'Operating System :: OS Independent',
    ],
    keywords='characteristic functions, locally compact abelian groups, independence, Gaussian distributions',
    python_requires='>=3.8',
    install_requires=[
        'numpy >= 1.20',
        'sympy >= 1.9',
        'click >= 7.0',
        'python-dotenv > 0.18.0',
        'Flask > 1.0.2',
        'Flask-RESTx > 0.5.1',
        'Werkzeug > 1.0.1',
    ],
    extras_require={
        'dotenv': ['python-dotenv'],
        'dev': ['check-manifest', 'flake8'],
        'test': ['pytest', 'pytest-cov'],
    },
    entry_points={
        'console_scripts': [
            'pycylinder=app.cli:cli',
        ],
    },
)
