# Generated by Django 5.0.10 on 2025-10-13 11:04

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('name', models.CharField(default='experiment', help_text='Experiment name', max_length=200)),
                ('datasets', models.JSONField(default=list, help_text='Dataset labels in run order')),
                ('seed', models.IntegerField(default=0, help_text='Base random seed')),
                ('config_text', models.TextField(blank=True, default='', help_text='Raw experiment configuration')),
                ('output_dir', models.CharField(blank=True, default='', help_text='Directory of written CSV artifacts', max_length=500)),
                ('status', models.CharField(choices=[('pending', 'Pending'), ('processing', 'Processing'), ('completed', 'Completed'), ('failed', 'Failed')], db_index=True, default='pending', help_text='Current processing status', max_length=20)),
                ('error_message', models.TextField(blank=True, help_text='Error message if the run failed', null=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
            options={
                'verbose_name': 'Experiment run',
                'verbose_name_plural': 'Experiment runs',
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='ModelResult',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('dataset', models.CharField(max_length=100)),
                ('model_id', models.CharField(db_index=True, max_length=20)),
                ('rmse', models.FloatField(blank=True, null=True)),
                ('nmse', models.FloatField(blank=True, null=True)),
                ('r2', models.FloatField(blank=True, null=True)),
                ('u1', models.FloatField(blank=True, null=True)),
                ('u2', models.FloatField(blank=True, null=True)),
                ('r_up', models.FloatField(blank=True, null=True)),
                ('r_down', models.FloatField(blank=True, null=True)),
                ('cpu_time', models.FloatField(blank=True, null=True)),
                ('wt_entropy', models.FloatField(blank=True, help_text='Log energy entropy of the WT low band', null=True)),
                ('emd_entropy', models.FloatField(blank=True, help_text='Log energy entropy of the EMD low band', null=True)),
                ('hyper', models.JSONField(blank=True, default=dict, help_text='Chosen hyperparameters')),
                ('error', models.TextField(blank=True, default='', help_text='Error tag if the model failed')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('run', models.ForeignKey(help_text='Run this result belongs to', on_delete=django.db.models.deletion.CASCADE, related_name='results', to='ramps.experimentrun')),
            ],
            options={
                'ordering': ['run', 'dataset', 'id'],
                'constraints': [models.UniqueConstraint(fields=('run', 'dataset', 'model_id'), name='unique_run_dataset_model')],
            },
        ),
    ]
