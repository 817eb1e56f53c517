import os
import math

import numpy as np
import pandas as pd
from loguru import logger
from sklearn.metrics import r2_score, mean_absolute_percentage_error, mean_squared_error

from CARBONSIM.commons.models.entities import MeasurementRun, MetricsReport
from CARBONSIM.commons.errors import (EvaluationError, LengthMismatch, ZeroVariance, ZeroTrueValue,
                                      CountMismatch, LabelMismatch, MissingColumn, NonNumericCell)
import CARBONSIM.commons.configurations as cnf


QUANTITIES = ('energy_kwh', 'emissions_kg')
DEFAULT_LABEL = 'default'


# [MEASUREMENT FILES]
#==============================================================================
# CodeCarbon output CSVs, with remappable column names
#==============================================================================
def _cell_to_float(value, column, row):
    if str(value).strip() == '':
        raise NonNumericCell(f'row {row}: column "{column}" is empty')
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise NonNumericCell(f'row {row}: column "{column}" holds non-numeric value {value!r}') from None
    if not math.isfinite(number):
        raise NonNumericCell(f'row {row}: column "{column}" holds non-finite value {value!r}')
    if number < 0:
        raise EvaluationError(f'row {row}: column "{column}" must be >= 0, got {number}')

    return number

#------------------------------------------------------------------------------
def load_measurements(path, column_map=None):

    '''
    Loads measured (or simulated) runs from a CSV with the CodeCarbon schema.
    Energy is read from cpu_energy (kWh) and emissions from emissions (kg)
    unless column_map points them elsewhere. Files without a run id column get
    row numbers as ids, files without a label column get the label "default".

    Keyword Arguments:
        path (str): Path to the CSV file.
        column_map (dict, optional): Overrides of MEASUREMENT_COLUMNS, mapping
                                     run_id, label, energy_kwh and emissions_kg
                                     to column names.

    Returns:
        list of MeasurementRun: one run per row, in file order.

    '''
    columns = {**cnf.MEASUREMENT_COLUMNS, **(column_map or {})}
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        return []
    for key in ('energy_kwh', 'emissions_kg'):
        if columns[key] not in frame.columns:
            raise MissingColumn(f'{path}: missing column "{columns[key]}" ({key})')

    runs = []
    for index, row in enumerate(frame.to_dict('records')):
        run_id = row.get(columns['run_id'], str(index)) or str(index)
        label = row.get(columns['label'], DEFAULT_LABEL) or DEFAULT_LABEL
        energy = _cell_to_float(row[columns['energy_kwh']], columns['energy_kwh'], index + 1)
        emissions = _cell_to_float(row[columns['emissions_kg']], columns['emissions_kg'], index + 1)
        runs.append(MeasurementRun(str(run_id), str(label), energy, emissions))

    return runs

#------------------------------------------------------------------------------
def save_measurements(runs, path):
    columns = cnf.MEASUREMENT_COLUMNS
    frame = pd.DataFrame([{columns['run_id'] : run.run_id,
                           columns['label'] : run.label,
                           columns['energy_kwh'] : run.energy_kwh,
                           columns['emissions_kg'] : run.emissions_kg} for run in runs],
                         columns=[columns[key] for key in ('run_id', 'label', 'energy_kwh', 'emissions_kg')])
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator='\n')

    return path

#------------------------------------------------------------------------------
def derive_carbon_intensity(path, energy_column='energy_consumed', emissions_column='emissions'):

    '''
    Carbon intensity (g/kWh) implied by a CodeCarbon file: total emissions
    converted to grams divided by total energy consumed.

    '''
    frame = pd.read_csv(path)
    for column in (energy_column, emissions_column):
        if column not in frame.columns:
            raise MissingColumn(f'{path}: missing column "{column}"')
    energy = pd.to_numeric(frame[energy_column], errors='coerce')
    emissions = pd.to_numeric(frame[emissions_column], errors='coerce')
    if energy.isna().any() or emissions.isna().any():
        raise NonNumericCell(f'{path}: non-numeric energy or emission values')
    total_energy = float(energy.sum())
    if total_energy <= 0:
        raise EvaluationError(f'{path}: total energy must be > 0 to derive a carbon intensity')

    return float(emissions.sum()) * 1000.0 / total_energy


# [COMPARISON METRICS]
#==============================================================================
# R2, MAPE and RMSE between measured (true) and simulated (predicted) series
#==============================================================================
def _paired_arrays(y_true, y_pred, minimum=1):
    y_true = np.asarray(y_true, dtype=float).ravel()
    y_pred = np.asarray(y_pred, dtype=float).ravel()
    if y_true.shape != y_pred.shape:
        raise LengthMismatch(f'series lengths differ: {y_true.size} vs {y_pred.size}')
    if y_true.size < minimum:
        raise LengthMismatch(f'at least {minimum} paired values are required, got {y_true.size}')

    return y_true, y_pred

#------------------------------------------------------------------------------
def r2(y_true, y_pred):
    y_true, y_pred = _paired_arrays(y_true, y_pred, minimum=2)
    if np.all(y_true == y_true[0]):
        raise ZeroVariance('R2 is undefined when all true values are identical')

    return float(r2_score(y_true, y_pred))

#------------------------------------------------------------------------------
def mape(y_true, y_pred):
    y_true, y_pred = _paired_arrays(y_true, y_pred)
    if np.any(y_true == 0):
        raise ZeroTrueValue('MAPE is undefined when a true value is zero')

    return float(mean_absolute_percentage_error(y_true, y_pred)) * 100.0

#------------------------------------------------------------------------------
def rmse(y_true, y_pred):
    y_true, y_pred = _paired_arrays(y_true, y_pred)

    return float(np.sqrt(mean_squared_error(y_true, y_pred)))

#------------------------------------------------------------------------------
def _metric_or_nan(metric, label, y_true, y_pred):
    try:
        return metric(y_true, y_pred)
    except (LengthMismatch, ZeroVariance, ZeroTrueValue) as e:
        logger.warning(f'{label}: {metric.__name__} not computed ({e})')
        return float('nan')

#------------------------------------------------------------------------------
def _check_quantity(quantity):
    if quantity not in QUANTITIES:
        raise EvaluationError(f'unknown quantity {quantity!r}, expected one of {QUANTITIES}')

#------------------------------------------------------------------------------
def compare(real, simulated, quantity):

    '''
    Pairs measured and simulated runs by index, after sorting both by run id,
    and computes R2, MAPE and RMSE on the selected quantity. A metric that is
    undefined for the data (R2 with a single pair or constant measurements,
    MAPE with zero measurements) is reported as NaN.

    Keyword Arguments:
        real (list of MeasurementRun): Measured runs.
        simulated (list of MeasurementRun): Simulated runs, same count and label.
        quantity (str): energy_kwh or emissions_kg.

    Returns:
        MetricsReport: metrics of the comparison.

    '''
    _check_quantity(quantity)
    if len(real) != len(simulated):
        raise CountMismatch(f'{len(real)} measured runs vs {len(simulated)} simulated runs')
    if not real:
        raise CountMismatch('no runs to compare')
    real = sorted(real, key=lambda run: run.run_id)
    simulated = sorted(simulated, key=lambda run: run.run_id)
    for measured, predicted in zip(real, simulated):
        if measured.label != predicted.label:
            raise LabelMismatch(f'run {measured.run_id} ({measured.label}) paired with '
                                f'run {predicted.run_id} ({predicted.label})')

    label = real[0].label
    y_true = [getattr(run, quantity) for run in real]
    y_pred = [getattr(run, quantity) for run in simulated]

    return MetricsReport(label=label, quantity=quantity,
                         r2=_metric_or_nan(r2, label, y_true, y_pred),
                         mape_percent=_metric_or_nan(mape, label, y_true, y_pred),
                         rmse=rmse(y_true, y_pred), n=len(y_true))

#------------------------------------------------------------------------------
def _group_by_label(runs):
    groups = {}
    for run in runs:
        groups.setdefault(run.label, []).append(run)

    return groups

#------------------------------------------------------------------------------
def compare_by_label(real, simulated, quantity):
    real_groups = _group_by_label(real)
    simulated_groups = _group_by_label(simulated)
    if set(real_groups) != set(simulated_groups):
        raise LabelMismatch(f'measured labels {sorted(real_groups)} differ from '
                            f'simulated labels {sorted(simulated_groups)}')

    return [compare(real_groups[label], simulated_groups[label], quantity)
            for label in real_groups]


# [REPORTING]
#==============================================================================
def metrics_frame(reports):
    return pd.DataFrame([[r.label, r.quantity, r.n, r.r2, r.mape_percent, r.rmse] for r in reports],
                        columns=cnf.METRICS_COLUMNS)

#------------------------------------------------------------------------------
def write_metrics(reports, path):
    metrics_frame(reports).to_csv(path, index=False, lineterminator='\n')

    return path

#------------------------------------------------------------------------------
def format_metrics_table(reports):
    frame = metrics_frame(reports)

    return frame.to_string(index=False, float_format=lambda x: f'{x:.6g}')

#------------------------------------------------------------------------------
def boxplot_statistics(real, simulated, quantity):

    '''
    Plot-ready quartiles of the measured and simulated values of each label,
    as drawn by energy and emission boxplots.

    Returns:
        pandas.DataFrame: one row per (label, source) with min, q1, median,
                          q3, max and mean.

    '''
    _check_quantity(quantity)
    rows = []
    real_groups = _group_by_label(real)
    simulated_groups = _group_by_label(simulated)
    labels = list(real_groups) + [label for label in simulated_groups if label not in real_groups]
    for label in labels:
        for source, groups in (('real', real_groups), ('simulated', simulated_groups)):
            values = np.asarray([getattr(run, quantity) for run in groups.get(label, [])], dtype=float)
            if values.size == 0:
                continue
            q1, median, q3 = np.percentile(values, [25, 50, 75])
            rows.append([label, source, float(values.min()), float(q1), float(median),
                         float(q3), float(values.max()), float(values.mean())])

    return pd.DataFrame(rows, columns=cnf.BOXPLOT_COLUMNS)

#------------------------------------------------------------------------------
def write_boxplot(statistics, path):
    statistics.to_csv(path, index=False, lineterminator='\n')

    return path
