#!/usr/bin/env node
import { bridgeMain } from './bridge.js';

bridgeMain('ms-clap');
