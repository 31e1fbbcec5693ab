#!/usr/bin/env python

from setuptools import setup

setup(name='confidentia',
      version='0.1.0',
      description='Confidence distribution inference on the norm of a normal mean',
      long_description="""Confidentia computes confidence distributions, observed confidence intervals, marginal posteriors and
                          consonant beliefs for the norm of a multivariate normal mean with known variance (as the miss distance
                          in satellite conjunction assessment), and runs the Monte Carlo experiments comparing them.""",
      long_description_content_type='text/markdown',
      packages=['confidentia', 'confidentia.tests', 'confidentia.models'],
      package_data={
          'confidentia.tests': ['test_data/golden/*.csv']
       },
      install_requires = [
                          'numpy >=1.19.5, <2.0.0',
                          'scipy >=1.6.0, <2.0.0',
                          'pandas >=0.23.4, <2.0.0',
                          ],
      entry_points={
          'console_scripts': ['confidentia=confidentia.cli:main'],
      },
      license='Apache License 2.0',
    )
