# Generated by Django 5.1.1 on 2026-10-19 10:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='EstimateRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('label', models.CharField(blank=True, default='', max_length=100)),
                ('dimension', models.PositiveSmallIntegerField()),
                ('lam', models.FloatField()),
                ('radius', models.PositiveIntegerField()),
                ('n_reps', models.PositiveIntegerField()),
                ('n_coexist', models.PositiveIntegerField(default=0)),
                ('n_type1_dead', models.PositiveIntegerField(default=0)),
                ('n_type2_dead', models.PositiveIntegerField(default=0)),
                ('p_hat', models.FloatField()),
                ('ci_lo', models.FloatField()),
                ('ci_hi', models.FloatField()),
                ('master_seed', models.CharField(max_length=20)),
                ('config_digest', models.CharField(db_index=True, max_length=16)),
                ('fertile', models.BooleanField(default=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['created_at', 'id'],
            },
        ),
    ]
