import logging
import os

import cspark.sdk as Spark

CONFIG_DIR = os.path.dirname(os.path.abspath(__file__))
METADATA = {
    'vc_backend': os.getenv('EXPLORABLE_VC_BACKEND', 'exact'),  # exact | approx
    'num_workers': int(os.getenv('EXPLORABLE_NUM_WORKERS', '4')),  # run_suite threads
    'gammas': (2, 3, 4),  # default sweep
    'corruption_levels': (0.0, 0.25, 1.0),
}

logging.basicConfig(filename='console.log', filemode='w', format=Spark.DEFAULT_LOGGER_FORMAT)
logger = Spark.get_logger(context='Explorable')


class Config:
    VC_EXACT_LIMIT = int(os.getenv('EXPLORABLE_VC_EXACT_LIMIT', '40'))
    BRUTE_FORCE_LIMIT = int(os.getenv('EXPLORABLE_BRUTE_FORCE_LIMIT', '22'))
    NUM_WORKERS = METADATA['num_workers']
    VC_BACKEND = METADATA['vc_backend']
    GRID_DENOMINATOR = 10  # weights live on k + j/10, never on an integer limit
    RATIO_DIGITS = 6
    ALGORITHMS = ('offline', 'witness', 'alg1', 'alg2', 'alg1r', 'alg2r', 'sorting')
    OUTPUT_DIR = os.path.abspath(os.getenv('EXPLORABLE_OUTPUT_DIR', os.path.join(CONFIG_DIR, '..', 'outputs')))
